#include "qpv/spacetime.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qpv {

WorldLine WorldLine::canonical(double d) {
    if (!(d > 0)) throw std::invalid_argument("WorldLine: distance d must be positive");
    WorldLine w;
    w.positions["V0"] = 0.0;
    w.positions["P"] = d;
    w.positions["V1"] = 2.0 * d;
    w.positions["E0"] = 0.5 * d;
    w.positions["E1"] = 1.5 * d;
    return w;
}

double WorldLine::position(const std::string& party) const {
    auto it = positions.find(party);
    if (it == positions.end()) throw std::invalid_argument("WorldLine: unknown party " + party);
    return it->second;
}

double WorldLine::transit_time(const std::string& a, const std::string& b) const {
    return std::abs(position(a) - position(b));
}

void WorldLine::validate() const {
    const double v0 = position("V0");
    const double p = position("P");
    const double v1 = position("V1");
    const double lo = std::min(v0, v1);
    const double hi = std::max(v0, v1);
    if (!(p > lo && p < hi))
        throw std::invalid_argument("WorldLine: prover must lie strictly between the verifiers");
}

void Network::add_tap(const std::string& from, const std::string& to,
                      const std::string& adversary, InterceptFn fn) {
    const double xa = world_->position(from);
    const double xb = world_->position(to);
    const double xe = world_->position(adversary);
    const double lo = std::min(xa, xb);
    const double hi = std::max(xa, xb);
    if (!(xe > lo && xe < hi))
        throw std::invalid_argument("Network: tap coordinate must lie strictly between endpoints");
    taps_[{from, to}].push_back(Tap{adversary, xe, std::move(fn)});
}

std::vector<Network::Tap> Network::taps_on(const std::string& from, const std::string& to,
                                           double from_coord, double to_coord) const {
    auto it = taps_.find({from, to});
    std::vector<Tap> found;
    if (it == taps_.end()) return found;
    found = it->second;
    // order of encounter along the direction of travel
    std::stable_sort(found.begin(), found.end(), [&](const Tap& x, const Tap& y) {
        return std::abs(x.coordinate - from_coord) < std::abs(y.coordinate - from_coord);
    });
    (void)to_coord;
    return found;
}

std::uint64_t Network::send(const std::string& from, const std::string& to, Payload payload,
                            double at) {
    const std::uint64_t id = sched_->new_message_id();
    log_->event(at, from, "send", Json{{"to", to}, {"payload", payload.to_json()}});
    propagate(id, from, to, std::move(payload), at, world_->position(from), at, 0);
    return id;
}

void Network::propagate(std::uint64_t msg_id, const std::string& from, const std::string& to,
                        Payload payload, double sent_at, double from_coord, double at,
                        std::size_t next_tap) {
    const auto taps = taps_on(from, to, world_->position(from), world_->position(to));
    if (next_tap < taps.size()) {
        const Tap tap = taps[next_tap];
        const double hop = std::abs(tap.coordinate - from_coord);
        const double t_hit = at + hop;
        sched_->post_message(t_hit, msg_id, [this, msg_id, from, to, payload, sent_at, tap, t_hit,
                                             next_tap]() {
            InterceptContext ctx{from, to, tap.adversary, tap.coordinate, sent_at, t_hit, payload};
            TapAction action = tap.fn(ctx);
            const char* verb = action.kind == TapAction::Kind::forward  ? "forward"
                               : action.kind == TapAction::Kind::replace ? "replace"
                                                                         : "jam";
            log_->event(t_hit, tap.adversary, "intercept",
                        Json{{"from", from},
                             {"to", to},
                             {"action", verb},
                             {"payload", payload.to_json()}});
            if (action.kind == TapAction::Kind::jam) return;
            Payload onward =
                action.kind == TapAction::Kind::replace ? std::move(action.payload) : payload;
            propagate(msg_id, from, to, std::move(onward), sent_at, tap.coordinate, t_hit,
                      next_tap + 1);
        });
        return;
    }
    const double hop = std::abs(world_->position(to) - from_coord);
    const double t_arrive = at + hop;
    sched_->post_message(t_arrive, msg_id, [this, from, to, payload, sent_at, t_arrive]() {
        log_->event(t_arrive, to, "deliver",
                    Json{{"from", from}, {"payload", payload.to_json()}});
        auto it = handlers_.find(to);
        if (it != handlers_.end()) it->second(Delivery{from, to, payload, sent_at, t_arrive});
    });
}

} // namespace qpv
