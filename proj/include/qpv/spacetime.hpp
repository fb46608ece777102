#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <queue>
#include <string>
#include <vector>

#include "qpv/common.hpp"
#include "qpv/transcript.hpp"

namespace qpv {

/// Party positions on a 1-D axis. Coordinates are in light-seconds with the
/// signal speed normalized to c = 1, so timing checks reduce to geometry.
/// All clocks are synchronized (zero skew) by assumption.
struct WorldLine {
    std::map<std::string, double> positions;

    /// Canonical symmetric layout: V0 at 0, P at d, V1 at 2d, with default
    /// adversary posts E0 = d/2 (between V0 and P) and E1 = 3d/2.
    static WorldLine canonical(double d);

    double position(const std::string& party) const;
    double transit_time(const std::string& a, const std::string& b) const;
    bool has(const std::string& party) const { return positions.count(party) != 0; }

    /// The 1-D scenarios require the prover strictly between the verifiers.
    void validate() const;
};

inline bool verify_timing(double expected, double observed, double tol) {
    if (tol < 0) throw std::invalid_argument("verify_timing: negative tolerance");
    return std::abs(expected - observed) <= tol;
}

/// Deterministic discrete-event scheduler. Items run in nondecreasing time;
/// ties are broken by (lane, sequence) so that in-flight messages keep a
/// stable order no matter where interception splits their trajectory.
class Scheduler {
public:
    using Action = std::function<void()>;

    /// Lane 0: message trajectories, keyed by the id assigned at send time.
    /// Lane 1: everything else, keyed by insertion order.
    void post_message(double t, std::uint64_t message_id, Action fn) {
        check_not_past(t);
        queue_.push(Item{t, 0, message_id, next_insert_++, std::move(fn)});
    }
    void post(double t, Action fn) {
        check_not_past(t);
        queue_.push(Item{t, 1, next_insert_, next_insert_, std::move(fn)});
        ++next_insert_;
    }

    std::uint64_t new_message_id() { return next_message_id_++; }

    double now() const { return now_; }

    void run() {
        while (!queue_.empty()) {
            Item item = queue_.top();
            queue_.pop();
            now_ = item.t;
            item.fn();
        }
    }

private:
    struct Item {
        double t;
        int lane;
        std::uint64_t key;
        std::uint64_t insert;
        Action fn;
    };
    struct Later {
        bool operator()(const Item& a, const Item& b) const {
            if (a.t != b.t) return a.t > b.t;
            if (a.lane != b.lane) return a.lane > b.lane;
            if (a.key != b.key) return a.key > b.key;
            return a.insert > b.insert;
        }
    };

    void check_not_past(double t) const {
        if (t < now_) throw internal_error("Scheduler: scheduling into the past");
    }

    std::priority_queue<Item, std::vector<Item>, Later> queue_;
    std::uint64_t next_message_id_ = 0;
    std::uint64_t next_insert_ = 0;
    double now_ = -std::numeric_limits<double>::infinity();
};

/// What travels on a channel: classical data, qubit ids, or both. Qubits are
/// referenced by id; the quantum state lives in the run's register manager.
struct Payload {
    std::string kind;       // e.g. "qubit", "bit", "label", "message"
    Json data;              // classical content
    std::vector<int> qubits;

    Json to_json() const {
        Json j;
        j["kind"] = kind;
        if (!data.is_null()) j["data"] = data;
        if (!qubits.empty()) j["qubits"] = qubits;
        return j;
    }
};

struct Delivery {
    std::string from;
    std::string to;
    Payload payload;
    double sent_at = 0.0;
    double at = 0.0;
};

struct InterceptContext {
    std::string from;
    std::string to;
    std::string adversary;
    double coordinate = 0.0;
    double sent_at = 0.0;
    double at = 0.0;
    Payload payload;
};

struct TapAction {
    enum class Kind { forward, replace, jam } kind = Kind::forward;
    Payload payload;

    static TapAction forward() { return TapAction{Kind::forward, {}}; }
    static TapAction replace(Payload p) { return TapAction{Kind::replace, std::move(p)}; }
    static TapAction jam() { return TapAction{Kind::jam, {}}; }
};

/// Untrusted 1-D network: every channel carries qubits and classical bits
/// identically at speed c, and any channel may be tapped. A tap suspends the
/// payload at the tap coordinate and lets the adversary forward, replace or
/// jam it; forwarded or replaced payloads arrive exactly when the original
/// would have.
class Network {
public:
    using DeliverFn = std::function<void(const Delivery&)>;
    using InterceptFn = std::function<TapAction(const InterceptContext&)>;

    Network(const WorldLine& world, Scheduler& sched, TranscriptBuilder& log)
        : world_(&world), sched_(&sched), log_(&log) {}

    /// Registers a tap on traffic flowing from `from` to `to`. The adversary's
    /// coordinate must lie strictly between the endpoints. (Tapping the other
    /// direction is a separate registration; an adversary that only wants to
    /// listen one way should only pay for that leg.)
    void add_tap(const std::string& from, const std::string& to, const std::string& adversary,
                 InterceptFn fn);

    void on_deliver(const std::string& party, DeliverFn fn) { handlers_[party] = std::move(fn); }

    /// Schedules the payload to leave `from` at time `at` toward `to`,
    /// passing any taps on the way. Returns the message id.
    std::uint64_t send(const std::string& from, const std::string& to, Payload payload, double at);

private:
    struct Tap {
        std::string adversary;
        double coordinate;
        InterceptFn fn;
    };

    void propagate(std::uint64_t msg_id, const std::string& from, const std::string& to,
                   Payload payload, double sent_at, double from_coord, double at,
                   std::size_t next_tap);
    std::vector<Tap> taps_on(const std::string& a, const std::string& b, double from_coord,
                             double to_coord) const;

    const WorldLine* world_;
    Scheduler* sched_;
    TranscriptBuilder* log_;
    std::map<std::pair<std::string, std::string>, std::vector<Tap>> taps_;
    std::map<std::string, DeliverFn> handlers_;
};

} // namespace qpv
