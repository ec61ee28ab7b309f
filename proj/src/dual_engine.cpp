#include "minsum/dual_engine.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <queue>
#include <stdexcept>
#include <tuple>

namespace minsum {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

/// Relative slack under which two event times are treated as simultaneous.
constexpr double kTimeSlack = 1e-12;

struct Levels {
    std::vector<double> scale;     // b^j
    std::vector<std::size_t> lo;   // b^j
    std::vector<std::size_t> cap;  // min(n, b^{j+1} - 1)
};

Levels make_levels(std::size_t n, std::uint64_t base) {
    Levels lv;
    const int top = floor_log(base, n);
    for (int j = 0; j <= top; ++j) {
        const std::uint64_t p = int_pow(base, j);
        lv.scale.push_back(static_cast<double>(p));
        lv.lo.push_back(p);
        lv.cap.push_back(std::min<std::uint64_t>(n, p * base - 1));
    }
    return lv;
}

/// All points by (distance to y, x != y, index).
void neighbor_order(const Instance& inst, PointIndex y, std::vector<std::uint32_t>& out) {
    const auto row = inst.distance_row(y);
    out.resize(inst.size());
    for (std::size_t x = 0; x < out.size(); ++x) {
        out[x] = static_cast<std::uint32_t>(x);
    }
    std::sort(out.begin(), out.end(), [&](std::uint32_t a, std::uint32_t b) {
        return std::make_tuple(row[a], a != y, a) < std::make_tuple(row[b], b != y, b);
    });
}

struct ValuedPoint {
    double value;
    PointIndex index;
};

bool by_value_desc(const ValuedPoint& a, const ValuedPoint& b) {
    return a.value > b.value || (a.value == b.value && a.index < b.index);
}

/**
 * Per-level computations shared by the reference scan and the heap engine.
 *
 * Active points all carry the current time t as their dual, so at time t an
 * active x contributes t - c dist(x, y) and an inactive x contributes the
 * frozen alpha_x - c dist(x, y). Holding the number q of active members
 * fixed, the best set takes the q nearest active points plus the best
 * inactive ones, and its value is linear in t with slope q. The level
 * becomes tight at the smallest root over q.
 */
class LevelKernel {
public:
    LevelKernel(const Instance& inst, std::span<const double> alpha, std::span<const char> active)
        : inst_(inst), alpha_(alpha), active_(active) {}

    /// Earliest t >= t_now with some level-j set reaching `target`.
    double tight_time(PointIndex y, double c, std::size_t lo, std::size_t cap,
                      std::span<const std::uint32_t> order, double t_now, double target) {
        if (!prepare(y, c, cap, order)) {
            return kInf;
        }
        double best = kInf;
        const std::size_t qmax = std::min(actives_.size(), cap);
        for (std::size_t q = 1; q <= qmax; ++q) {
            const auto r = best_inactive_count(q, lo, cap);
            if (!r) {
                continue;
            }
            const double t = (target + active_prefix_[q] - inactive_prefix_[*r]) / static_cast<double>(q);
            best = std::min(best, std::max(t_now, t));
        }
        return best;
    }

    /// Best level-j set at time t (the family used by tight_time).
    IndexSet best_set(PointIndex y, double c, std::size_t lo, std::size_t cap,
                      std::span<const std::uint32_t> order, double t) {
        IndexSet out;
        if (!prepare(y, c, cap, order)) {
            return out;
        }
        double best = -kInf;
        std::size_t best_q = 0;
        std::size_t best_r = 0;
        const std::size_t qmax = std::min(actives_.size(), cap);
        for (std::size_t q = 1; q <= qmax; ++q) {
            const auto r = best_inactive_count(q, lo, cap);
            if (!r) {
                continue;
            }
            const double v = static_cast<double>(q) * t - active_prefix_[q] + inactive_prefix_[*r];
            if (v > best) {
                best = v;
                best_q = q;
                best_r = *r;
            }
        }
        if (best_q == 0) {
            return out;
        }
        for (std::size_t i = 0; i < best_q; ++i) {
            out.push_back(actives_[i]);
        }
        for (std::size_t i = 0; i < best_r; ++i) {
            out.push_back(inactive_[i].index);
        }
        std::sort(out.begin(), out.end());
        return out;
    }

private:
    bool prepare(PointIndex y, double c, std::size_t cap, std::span<const std::uint32_t> order) {
        const auto row = inst_.distance_row(y);
        actives_.clear();
        active_prefix_.assign(1, 0.0);
        for (std::uint32_t x : order) {
            if (!active_[x]) {
                continue;
            }
            if (actives_.size() == cap) {
                break;
            }
            actives_.push_back(x);
            active_prefix_.push_back(active_prefix_.back() + c * row[x]);
        }
        if (actives_.empty()) {
            return false;
        }

        inactive_.clear();
        forced_ = active_[y] ? 0 : 1;
        for (std::size_t x = 0; x < inst_.size(); ++x) {
            if (!active_[x] && x != y) {
                inactive_.push_back({alpha_[x] - c * row[x], x});
            }
        }
        std::sort(inactive_.begin(), inactive_.end(), by_value_desc);
        if (forced_) {
            inactive_.insert(inactive_.begin(), ValuedPoint{alpha_[y], y});
        }
        inactive_prefix_.assign(1, 0.0);
        nonneg_ = forced_;
        for (std::size_t i = 0; i < inactive_.size(); ++i) {
            inactive_prefix_.push_back(inactive_prefix_.back() + inactive_[i].value);
            if (i >= forced_ && inactive_[i].value >= 0.0) {
                ++nonneg_;
            }
        }
        return true;
    }

    /// Inactive count maximising the inactive sum for q active members.
    std::optional<std::size_t> best_inactive_count(std::size_t q, std::size_t lo,
                                                   std::size_t cap) const {
        const std::size_t need = lo > q ? lo - q : 0;
        const std::size_t rlo = std::max(forced_, need);
        const std::size_t rhi = std::min(inactive_.size(), cap - q);
        if (rlo > rhi) {
            return std::nullopt;
        }
        return std::clamp(nonneg_, rlo, rhi);
    }

    const Instance& inst_;
    std::span<const double> alpha_;
    std::span<const char> active_;
    std::vector<PointIndex> actives_;
    std::vector<double> active_prefix_;
    std::vector<ValuedPoint> inactive_;
    std::vector<double> inactive_prefix_;
    std::size_t forced_ = 0;
    std::size_t nonneg_ = 0;
};

/**
 * Prefix detector for one (y, j). `alpha` must hold current values for all
 * points, active ones included.
 */
std::optional<IndexSet> detect_level(const Instance& inst, std::span<const double> alpha,
                                     std::span<const char> active, PointIndex y, double c,
                                     std::size_t lo, std::size_t cap, bool require_active,
                                     double threshold, std::vector<ValuedPoint>& scratch) {
    const auto row = inst.distance_row(y);
    IndexSet forced{y};
    double sum = alpha[y];
    if (require_active && !active[y]) {
        // Best active member by value; it may sit outside the candidate set.
        std::optional<ValuedPoint> best;
        for (std::size_t x = 0; x < inst.size(); ++x) {
            if (active[x]) {
                const ValuedPoint v{alpha[x] - c * row[x], x};
                if (!best || by_value_desc(v, *best)) {
                    best = v;
                }
            }
        }
        if (!best) {
            return std::nullopt;
        }
        forced.push_back(best->index);
        sum += best->value;
    }
    if (forced.size() > cap) {
        return std::nullopt;
    }

    scratch.clear();
    for (std::size_t x = 0; x < inst.size(); ++x) {
        if (x == forced.front() || (forced.size() > 1 && x == forced.back())) {
            continue;
        }
        const double scaled = c * row[x];
        if (alpha[x] >= scaled) {
            scratch.push_back({alpha[x] - scaled, x});
        }
    }
    if (forced.size() + scratch.size() < lo) {
        return std::nullopt;
    }
    std::sort(scratch.begin(), scratch.end(), by_value_desc);

    std::size_t size = forced.size();
    std::size_t next = 0;
    while (true) {
        if (size >= lo && sum >= threshold) {
            IndexSet members = forced;
            for (std::size_t i = 0; i < next; ++i) {
                members.push_back(scratch[i].index);
            }
            std::sort(members.begin(), members.end());
            return members;
        }
        if (size == cap || next == scratch.size()) {
            return std::nullopt;
        }
        sum += scratch[next++].value;
        ++size;
    }
}

/// Shared state for one dual-ascent run.
struct AscentContext {
    AscentContext(const Instance& inst_, double lambda_, std::uint64_t base_)
        : inst(inst_),
          lambda(lambda_),
          base(base_),
          tau(tightness_tolerance(inst_, lambda_)),
          levels(make_levels(inst_.size(), base_)) {}

    const Instance& inst;
    double lambda;
    std::uint64_t base;
    double tau;
    Levels levels;

    /// Keys are exact tight times; the detector accepts a full tolerance
    /// below lambda so it always sees the set at its event time.
    double key_target() const { return lambda; }
    double detect_threshold() const { return lambda - tau; }
    double slack(double t) const { return kTimeSlack * std::max({std::abs(t), lambda, 1.0}); }
};

using LevelKey = std::pair<PointIndex, int>;

/**
 * Resolves the tight set at time t among candidate (y, j) pairs sorted in
 * scan order. Falls back to a full scan and finally to the kernel's own
 * best set for `fallback`, so the ascent always makes progress.
 */
TightSet resolve_tight(const AscentContext& ctx, std::vector<double>& alpha,
                       std::span<const char> active, double t,
                       const std::vector<LevelKey>& candidates, LevelKey fallback,
                       const std::vector<std::uint32_t>& fallback_order) {
    const Instance& inst = ctx.inst;
    for (std::size_t x = 0; x < inst.size(); ++x) {
        if (active[x]) {
            alpha[x] = t;
        }
    }
    std::vector<ValuedPoint> scratch;
    for (const auto& [y, j] : candidates) {
        if (auto members = detect_level(inst, alpha, active, y, ctx.levels.scale[j],
                                        ctx.levels.lo[j], ctx.levels.cap[j], true,
                                        ctx.detect_threshold(), scratch)) {
            return {std::move(*members), y, j};
        }
    }
    for (PointIndex y = 0; y < inst.size(); ++y) {
        for (int j = 0; j < static_cast<int>(ctx.levels.scale.size()); ++j) {
            if (auto members = detect_level(inst, alpha, active, y, ctx.levels.scale[j],
                                            ctx.levels.lo[j], ctx.levels.cap[j], true,
                                            ctx.detect_threshold(), scratch)) {
                return {std::move(*members), y, j};
            }
        }
    }
    LevelKernel kernel(inst, alpha, active);
    const auto [y, j] = fallback;
    IndexSet members = kernel.best_set(y, ctx.levels.scale[j], ctx.levels.lo[j],
                                       ctx.levels.cap[j], fallback_order, t);
    if (members.empty()) {
        throw std::logic_error("dual ascent: no tight set at the predicted event time");
    }
    return {std::move(members), y, j};
}

}  // namespace

double tightness_tolerance(const Instance& inst, double lambda) {
    return kRelTolerance * (std::abs(lambda) + static_cast<double>(inst.size()) * inst.max_distance());
}

int max_level(const Instance& inst, std::uint64_t base) {
    return floor_log(base, inst.size());
}

std::vector<PointIndex> candidate_set(const Instance& inst, const DualState& state, PointIndex y,
                                      int j) {
    if (y >= inst.size() || state.alpha.size() != inst.size()) {
        throw std::invalid_argument("candidate_set: state does not match instance");
    }
    const double c = static_cast<double>(int_pow(state.base, j));
    const auto row = inst.distance_row(y);
    std::vector<ValuedPoint> members;
    for (std::size_t x = 0; x < inst.size(); ++x) {
        const double scaled = c * row[x];
        if (state.alpha[x] >= scaled) {
            members.push_back({state.alpha[x] - scaled, x});
        }
    }
    std::sort(members.begin(), members.end(), by_value_desc);
    std::vector<PointIndex> out;
    out.reserve(members.size());
    for (const auto& m : members) {
        out.push_back(m.index);
    }
    return out;
}

std::optional<TightSet> detect_violation(const Instance& inst, const DualState& state,
                                         bool require_active, double margin) {
    if (state.alpha.size() != inst.size() || state.active.size() != inst.size()) {
        throw std::invalid_argument("detect_violation: state does not match instance");
    }
    const Levels lv = make_levels(inst.size(), state.base);
    std::vector<ValuedPoint> scratch;
    for (PointIndex y = 0; y < inst.size(); ++y) {
        for (int j = 0; j < static_cast<int>(lv.scale.size()); ++j) {
            if (auto members = detect_level(inst, state.alpha, state.active, y, lv.scale[j], lv.lo[j],
                                            lv.cap[j], require_active, state.lambda + margin,
                                            scratch)) {
                return TightSet{std::move(*members), y, j};
            }
        }
    }
    return std::nullopt;
}

std::optional<TightSet> detect_violation(const Instance& inst, const DualState& state,
                                         bool require_active) {
    return detect_violation(inst, state, require_active, -tightness_tolerance(inst, state.lambda));
}

double max_constraint_slack(const Instance& inst, std::span<const double> alpha, double lambda,
                            std::uint64_t base) {
    if (alpha.size() != inst.size()) {
        throw std::invalid_argument("max_constraint_slack: alpha does not match instance");
    }
    const Levels lv = make_levels(inst.size(), base);
    std::vector<double> values;
    double worst = -kInf;
    for (PointIndex y = 0; y < inst.size(); ++y) {
        const auto row = inst.distance_row(y);
        for (std::size_t j = 0; j < lv.scale.size(); ++j) {
            values.clear();
            for (std::size_t x = 0; x < inst.size(); ++x) {
                const double v = alpha[x] - lv.scale[j] * row[x];
                if (x != y && v >= 0.0) {
                    values.push_back(v);
                }
            }
            const std::size_t take = std::min(values.size(), lv.cap[j] - 1);
            if (1 + take < lv.lo[j]) {
                continue;
            }
            std::partial_sort(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(take),
                              values.end(), std::greater<>());
            double sum = alpha[y];
            for (std::size_t i = 0; i < take; ++i) {
                sum += values[i];
            }
            worst = std::max(worst, sum - lambda);
        }
    }
    return worst;
}

PhaseEvent next_event_increment(const Instance& inst, const DualState& state,
                                std::span<const ScaledCluster> pclusters) {
    const std::size_t n = inst.size();
    if (state.alpha.size() != n || state.active.size() != n) {
        throw std::invalid_argument("next_event_increment: state does not match instance");
    }
    const auto first_active = std::find(state.active.begin(), state.active.end(), 1);
    if (first_active == state.active.end()) {
        throw std::invalid_argument("next_event_increment: no active points");
    }
    const double t_now = state.alpha[static_cast<std::size_t>(first_active - state.active.begin())];
    const AscentContext ctx(inst, state.lambda, state.base);

    double join_time = kInf;
    JoinExisting join;
    for (PointIndex x = 0; x < n; ++x) {
        if (!state.active[x]) {
            continue;
        }
        for (std::size_t c = 0; c < pclusters.size(); ++c) {
            const double t = std::max(t_now, scaled_distance(inst, x, pclusters[c], state.base));
            if (t < join_time) {
                join_time = t;
                join = {x, c};
            }
        }
    }

    std::vector<double> alpha = state.alpha;
    LevelKernel kernel(inst, alpha, state.active);
    std::vector<std::uint32_t> order;
    std::vector<std::tuple<double, PointIndex, int>> keys;
    double tight_time = kInf;
    for (PointIndex y = 0; y < n; ++y) {
        neighbor_order(inst, y, order);
        for (int j = 0; j < static_cast<int>(ctx.levels.scale.size()); ++j) {
            const double t = kernel.tight_time(y, ctx.levels.scale[j], ctx.levels.lo[j],
                                               ctx.levels.cap[j], order, t_now, ctx.key_target());
            if (t < kInf) {
                keys.emplace_back(t, y, j);
                tight_time = std::min(tight_time, t);
            }
        }
    }

    if (join_time <= tight_time + ctx.slack(tight_time)) {
        return {join_time - t_now, join};
    }
    std::vector<LevelKey> candidates;
    LevelKey fallback{0, 0};
    bool have_fallback = false;
    for (const auto& [t, y, j] : keys) {
        if (t == tight_time && !have_fallback) {
            fallback = {y, j};
            have_fallback = true;
        }
        if (t <= tight_time + ctx.slack(tight_time)) {
            candidates.emplace_back(y, j);
        }
    }
    std::sort(candidates.begin(), candidates.end());
    neighbor_order(inst, fallback.first, order);
    TightSet set = resolve_tight(ctx, alpha, state.active, tight_time, candidates, fallback, order);
    return {tight_time - t_now, NewTight{std::move(set)}};
}

namespace {

/**
 * Event-driven dual ascent. Level tight times only move later as points
 * deactivate (their duals freeze), so they live in a lazily refreshed
 * min-heap; join times are fixed once a cluster exists.
 */
class AscentEngine {
public:
    AscentEngine(const Instance& inst, double lambda, std::uint64_t base, std::size_t n_prime)
        : ctx_(inst, lambda, base),
          n_prime_(n_prime),
          alpha_(inst.size(), 0.0),
          active_(inst.size(), 1),
          num_active_(inst.size()),
          kernel_(inst, alpha_, active_) {}

    Phase1Output run() {
        const Instance& inst = ctx_.inst;
        const std::size_t n = inst.size();
        const std::size_t floor_active = n - n_prime_;
        Phase1Output out;
        out.lambda = ctx_.lambda;
        out.base = ctx_.base;
        out.tolerance = ctx_.tau;

        if (num_active_ > floor_active) {
            build_orders();
            for (PointIndex y = 0; y < n; ++y) {
                for (int j = 0; j < levels(); ++j) {
                    const double t = key(y, j);
                    if (t < kInf) {
                        level_heap_.emplace(t, y, j);
                    }
                }
            }
        }

        while (num_active_ > floor_active) {
            while (!join_heap_.empty() && !active_[std::get<1>(join_heap_.top())]) {
                join_heap_.pop();
            }
            const double join_time = join_heap_.empty() ? kInf : std::get<0>(join_heap_.top());
            const double tight_time = refresh_level_heap();
            if (join_time == kInf && tight_time == kInf) {
                throw std::logic_error("dual ascent stalled with active points left");
            }

            if (join_time <= tight_time + ctx_.slack(tight_time)) {
                const auto [t, x, c] = join_heap_.top();
                join_heap_.pop();
                t_now_ = t;
                deactivate(x);
                auto& members = clusters_[c].members;
                members.insert(std::lower_bound(members.begin(), members.end(), x), x);
                continue;
            }

            t_now_ = tight_time;
            TightSet set = take_tight_set(tight_time);
            std::size_t newly_inactive = 0;
            for (PointIndex x : set.members) {
                newly_inactive += active_[x] ? 1 : 0;
            }
            if (num_active_ - newly_inactive < floor_active) {
                out.y_last = ScaledCluster{std::move(set.members), set.scale, set.center};
                break;
            }
            for (PointIndex x : set.members) {
                if (active_[x]) {
                    deactivate(x);
                }
            }
            const std::size_t id = clusters_.size();
            clusters_.push_back({std::move(set.members), set.scale, set.center});
            for (PointIndex x = 0; x < n; ++x) {
                if (active_[x]) {
                    const double t = std::max(t_now_, scaled_distance(inst, x, clusters_[id], ctx_.base));
                    join_heap_.emplace(t, x, id);
                }
            }
        }

        for (PointIndex x = 0; x < n; ++x) {
            if (active_[x]) {
                alpha_[x] = t_now_;
            }
        }
        out.alpha = alpha_;
        out.pclusters = std::move(clusters_);
        return out;
    }

private:
    using LevelEntry = std::tuple<double, PointIndex, int>;
    using JoinEntry = std::tuple<double, PointIndex, std::size_t>;
    template <typename T>
    using MinHeap = std::priority_queue<T, std::vector<T>, std::greater<T>>;

    int levels() const { return static_cast<int>(ctx_.levels.scale.size()); }

    void build_orders() {
        const std::size_t n = ctx_.inst.size();
        orders_.resize(n * n);
        std::vector<std::uint32_t> order;
        for (PointIndex y = 0; y < n; ++y) {
            neighbor_order(ctx_.inst, y, order);
            std::copy(order.begin(), order.end(), orders_.begin() + static_cast<std::ptrdiff_t>(y * n));
        }
    }

    std::span<const std::uint32_t> order(PointIndex y) const {
        const std::size_t n = ctx_.inst.size();
        return {orders_.data() + y * n, n};
    }

    double key(PointIndex y, int j) {
        return kernel_.tight_time(y, ctx_.levels.scale[j], ctx_.levels.lo[j], ctx_.levels.cap[j],
                                  order(y), t_now_, ctx_.key_target());
    }

    /// Brings a fresh key to the top of the level heap and returns it.
    double refresh_level_heap() {
        while (!level_heap_.empty()) {
            const auto [stored, y, j] = level_heap_.top();
            const double t = key(y, j);
            if (t <= stored) {
                return stored;
            }
            level_heap_.pop();
            if (t < kInf) {
                level_heap_.emplace(t, y, j);
            }
        }
        return kInf;
    }

    TightSet take_tight_set(double t) {
        const double limit = t + ctx_.slack(t);
        std::vector<LevelEntry> popped;
        std::vector<LevelKey> candidates;
        LevelKey fallback = {std::get<1>(level_heap_.top()), std::get<2>(level_heap_.top())};
        while (!level_heap_.empty() && std::get<0>(level_heap_.top()) <= limit) {
            const auto [stored, y, j] = level_heap_.top();
            level_heap_.pop();
            const double fresh = key(y, j);
            if (fresh <= limit) {
                candidates.emplace_back(y, j);
            }
            if (fresh < kInf) {
                popped.emplace_back(fresh, y, j);
            }
        }
        for (const auto& e : popped) {
            level_heap_.push(e);
        }
        std::sort(candidates.begin(), candidates.end());
        const auto fb = order(fallback.first);
        std::vector<std::uint32_t> fallback_order(fb.begin(), fb.end());
        return resolve_tight(ctx_, alpha_, active_, t, candidates, fallback, fallback_order);
    }

    void deactivate(PointIndex x) {
        alpha_[x] = t_now_;
        active_[x] = 0;
        --num_active_;
    }

    AscentContext ctx_;
    std::size_t n_prime_;
    std::vector<double> alpha_;
    std::vector<char> active_;
    std::size_t num_active_;
    double t_now_ = 0.0;
    LevelKernel kernel_;
    std::vector<std::uint32_t> orders_;
    std::vector<ScaledCluster> clusters_;
    MinHeap<LevelEntry> level_heap_;
    MinHeap<JoinEntry> join_heap_;
};

}  // namespace

Phase1Output run_phase1(const Instance& inst, double lambda, std::uint64_t base,
                        std::size_t n_prime) {
    if (!(lambda >= 0.0)) {
        throw std::invalid_argument("run_phase1: lambda must be nonnegative");
    }
    if (base < 2) {
        throw std::invalid_argument("run_phase1: base must be at least 2");
    }
    if (n_prime > inst.size()) {
        throw std::invalid_argument("run_phase1: n' exceeds the number of points");
    }
    AscentEngine engine(inst, lambda, base, n_prime);
    Phase1Output out = engine.run();

    // Every point outside the collected clusters must still sit at the top dual value.
    const double gamma = *std::max_element(out.alpha.begin(), out.alpha.end());
    std::vector<char> covered(inst.size(), 0);
    for (const auto& c : out.pclusters) {
        for (PointIndex x : c.members) {
            covered[x] = 1;
        }
    }
    for (PointIndex x = 0; x < inst.size(); ++x) {
        if (!covered[x] && out.alpha[x] != gamma) {
            throw std::logic_error("dual ascent: unclustered point below the maximal dual value");
        }
    }
    return out;
}

Phase1Output run_phase1(const Instance& inst, double lambda, std::uint64_t base) {
    return run_phase1(inst, lambda, base, inst.n_prime());
}

}  // namespace minsum
