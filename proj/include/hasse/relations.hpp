#ifndef HASSE_RELATIONS_HPP
#define HASSE_RELATIONS_HPP

#include "hasse/design.hpp"

namespace hasse {

/// How two partitions relate. NestedIn means the first is finer (each of
/// its classes sits inside one class of the second); Nests is the converse.
enum class Relationship { Equivalent, NestedIn, Nests, FullyCrossed, PartiallyCrossed };

const char* to_string(Relationship r);

/// True iff every class of p lies inside a single class of q.
bool refines(const Partition& p, const Partition& q);

/// Classify per the four textbook relationships (plus Equivalent).
/// Exactly one outcome is returned for any pair over the same units.
Relationship classify(const Partition& p, const Partition& q);

} // namespace hasse

#endif
