#include "hasse/relations.hpp"

#include <unordered_set>

namespace hasse {

const char* to_string(Relationship r) {
    switch (r) {
    case Relationship::Equivalent: return "equivalent";
    case Relationship::NestedIn: return "nested in";
    case Relationship::Nests: return "nests";
    case Relationship::FullyCrossed: return "fully crossed";
    case Relationship::PartiallyCrossed: return "partially crossed";
    }
    return "?";
}

static void check_units(const Partition& p, const Partition& q) {
    if (p.n_units() != q.n_units())
        throw Error("partition unit-count mismatch: " + std::to_string(p.n_units()) + " vs " +
                    std::to_string(q.n_units()));
}

bool refines(const Partition& p, const Partition& q) {
    check_units(p, q);
    std::vector<int> image(p.n_classes, -1);
    for (int u = 0; u < p.n_units(); ++u) {
        int& im = image[p.class_of[u]];
        if (im == -1)
            im = q.class_of[u];
        else if (im != q.class_of[u])
            return false;
    }
    return true;
}

Relationship classify(const Partition& p, const Partition& q) {
    bool pq = refines(p, q);
    bool qp = refines(q, p);
    if (pq && qp) return Relationship::Equivalent;
    if (pq) return Relationship::NestedIn;
    if (qp) return Relationship::Nests;
    // crossing is decided by co-occurrence of class pairs over units
    std::unordered_set<long long> pairs;
    for (int u = 0; u < p.n_units(); ++u)
        pairs.insert(static_cast<long long>(p.class_of[u]) * q.n_classes + q.class_of[u]);
    long long all = static_cast<long long>(p.n_classes) * q.n_classes;
    return static_cast<long long>(pairs.size()) == all ? Relationship::FullyCrossed
                                                       : Relationship::PartiallyCrossed;
}

} // namespace hasse
