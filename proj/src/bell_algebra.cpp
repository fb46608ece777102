#include "qpv/bell_algebra.hpp"

#include <sstream>
#include <stdexcept>

namespace qpv {

BellLabel chain_label(std::span<const BellLabel> pair_labels,
                      std::span<const BellLabel> bsm_outcomes) {
    if (pair_labels.empty()) throw std::invalid_argument("chain_label: empty chain");
    if (bsm_outcomes.size() != pair_labels.size() - 1)
        throw std::invalid_argument("chain_label: need one outcome per interior junction");
    BellLabel acc(0, 0);
    for (BellLabel l : pair_labels) acc ^= l;
    for (BellLabel m : bsm_outcomes) acc ^= m;
    return acc;
}

BellLabel infer_hidden(std::span<const BellLabel> known_pairs,
                       std::span<const BellLabel> known_outcomes,
                       BellLabel observed_endpoint) {
    BellLabel acc = observed_endpoint;
    for (BellLabel l : known_pairs) acc ^= l;
    for (BellLabel m : known_outcomes) acc ^= m;
    return acc;
}

std::string emit_table() {
    std::ostringstream out;
    out << "entanglement swapping: residual labels\n";
    out << "pairs (1,3)=a and (2,4)=b; BSM on (1,2) yields m; residual (3,4)=r\n";
    out << "a  b  | m=00 m=01 m=10 m=11\n";
    for (BellLabel a : kAllBellLabels) {
        for (BellLabel b : kAllBellLabels) {
            out << a.str() << " " << b.str() << " |";
            for (BellLabel m : kAllBellLabels) {
                out << "  " << swap_label(a, b, m).str() << " ";
            }
            out << "\n";
        }
    }
    return out.str();
}

int PairRegistry::add_pair(int qubit_a, int qubit_b, BellLabel label) {
    if (qubit_a == qubit_b) throw std::invalid_argument("add_pair: distinct qubits required");
    if (qubit_to_pair_.count(qubit_a) || qubit_to_pair_.count(qubit_b))
        throw std::invalid_argument("add_pair: qubit already belongs to a live pair");
    const int id = static_cast<int>(pairs_.size());
    pairs_.push_back(Pair{qubit_a, qubit_b, label});
    qubit_to_pair_[qubit_a] = id;
    qubit_to_pair_[qubit_b] = id;
    return id;
}

bool PairRegistry::has_live_pair(int qubit) const { return qubit_to_pair_.count(qubit) != 0; }

const PairRegistry::Pair& PairRegistry::live_pair_of(int qubit) const {
    auto it = qubit_to_pair_.find(qubit);
    if (it == qubit_to_pair_.end())
        throw std::invalid_argument("PairRegistry: qubit has no live pair (consumed or unknown)");
    return pairs_[static_cast<std::size_t>(it->second)];
}

bool PairRegistry::same_pair(int qubit_a, int qubit_b) const {
    auto ia = qubit_to_pair_.find(qubit_a);
    auto ib = qubit_to_pair_.find(qubit_b);
    return ia != qubit_to_pair_.end() && ib != qubit_to_pair_.end() && ia->second == ib->second;
}

BellLabel PairRegistry::label_of(int qubit_a, int qubit_b) const {
    if (!same_pair(qubit_a, qubit_b))
        throw std::invalid_argument("PairRegistry: qubits do not form a live pair");
    return live_pair_of(qubit_a).label;
}

int PairRegistry::partner_of(int qubit) const {
    const Pair& p = live_pair_of(qubit);
    return p.a == qubit ? p.b : p.a;
}

void PairRegistry::apply_pauli(int qubit, PauliOp p) {
    auto it = qubit_to_pair_.find(qubit);
    if (it == qubit_to_pair_.end())
        throw std::invalid_argument("PairRegistry: Pauli on a qubit without a live pair");
    pairs_[static_cast<std::size_t>(it->second)].label ^= pauli_label(p);
}

BellLabel PairRegistry::do_swap(int qubit_a, int qubit_b, BellLabel outcome) {
    const Pair pa = live_pair_of(qubit_a);
    const Pair pb = live_pair_of(qubit_b);
    const int rest_a = pa.a == qubit_a ? pa.b : pa.a;
    const int rest_b = pb.a == qubit_b ? pb.b : pb.a;
    qubit_to_pair_.erase(pa.a);
    qubit_to_pair_.erase(pa.b);
    qubit_to_pair_.erase(pb.a);
    qubit_to_pair_.erase(pb.b);
    add_pair(qubit_a, qubit_b, outcome);
    add_pair(rest_a, rest_b, swap_label(pa.label, pb.label, outcome));
    return outcome;
}

BellLabel PairRegistry::bsm_label(int qubit_a, int qubit_b, Rng& rng) {
    return bsm_label_forced(qubit_a, qubit_b, BellLabel::from_code(rng.uniform_int(4)));
}

BellLabel PairRegistry::bsm_label_forced(int qubit_a, int qubit_b, BellLabel outcome) {
    if (same_pair(qubit_a, qubit_b))
        throw std::invalid_argument(
            "PairRegistry: BSM on a complete pair is deterministic; use close_pair "
            "or the state-vector engine");
    live_pair_of(qubit_a);
    live_pair_of(qubit_b);
    return do_swap(qubit_a, qubit_b, outcome);
}

BellLabel PairRegistry::close_pair(int qubit_a, int qubit_b) {
    const BellLabel label = label_of(qubit_a, qubit_b);
    qubit_to_pair_.erase(qubit_a);
    qubit_to_pair_.erase(qubit_b);
    add_pair(qubit_a, qubit_b, label); // measured pair stays in its own Bell state
    return label;
}

void PairRegistry::release(int qubit) {
    auto it = qubit_to_pair_.find(qubit);
    if (it == qubit_to_pair_.end()) return;
    const Pair p = pairs_[static_cast<std::size_t>(it->second)];
    qubit_to_pair_.erase(p.a);
    qubit_to_pair_.erase(p.b);
}

} // namespace qpv
