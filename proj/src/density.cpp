#include "lpcorr/density.hpp"

#include <algorithm>
#include <map>

#include "lpcorr/errors.hpp"

namespace lpcorr {

namespace {

// 64 * (1 + ceil(log_p(max(H) + 1)))
int depth_cap_for(Int p, Int max_shift) {
    int levels = 0;
    for (Int v = max_shift + 1; v > 1; v = (v + p - 1) / p) ++levels;
    return 64 * (1 + levels);
}

Rational singleton_density(Int p) { return Rational(1, p + 1); }

std::vector<Int> rescaled(std::span<const Int> shifts, Int p, Int offset) {
    std::vector<Int> out;
    out.reserve(shifts.size());
    for (Int h : shifts) out.push_back((h - offset) / p);
    return out;
}

} // namespace

std::size_t LocalDensitySolver::KeyHash::operator()(const Key& k) const noexcept {
    std::size_t h = std::hash<Int>{}(k.prime);
    for (Int v : k.shifts) h ^= std::hash<Int>{}(v) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h;
}

Rational LocalDensitySolver::eta(Int p, const ShiftSet& shifts) { return solve(p, shifts).value; }

LocalDensity LocalDensitySolver::solve(Int p, const ShiftSet& shifts, bool with_trace) {
    if (!is_prime(p)) throw InvalidArgument("not a prime: " + std::to_string(p));
    LocalDensity out;
    out.prime = p;
    out.shifts = shifts;
    const int cap = depth_cap_for(p, shifts.max());
    if (with_trace) {
        DensityTrace trace;
        std::size_t root = 0;
        out.value = recurse(p, shifts.values(), 0, cap, &trace, &root);
        out.trace = std::move(trace);
    } else {
        out.value = recurse(p, shifts.values(), 0, cap, nullptr, nullptr);
    }
    return out;
}

Rational LocalDensitySolver::recurse(Int p, std::span<const Int> shifts, int depth, int depth_cap,
                                     DensityTrace* trace, std::size_t* step_index) {
    if (depth > depth_cap)
        throw ResourceLimit("local density recursion exceeded depth cap " + std::to_string(depth_cap));

    auto record = [&](DensityStep step) {
        trace->push_back(std::move(step));
        *step_index = trace->size() - 1;
    };

    if (shifts.size() <= 1) {
        Rational value = shifts.empty() ? Rational(0) : singleton_density(p);
        if (trace) {
            record({shifts.empty() ? DensityStep::Kind::empty : DensityStep::Kind::singleton,
                    ShiftSet(std::vector<Int>(shifts.begin(), shifts.end())), value, {}, 0});
        }
        return value;
    }

    Key key{p, {}};
    if (!trace) {
        key.shifts.reserve(shifts.size());
        for (Int h : shifts) key.shifts.push_back(h - shifts.front());
        std::lock_guard lock(mutex_);
        if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    }

    // residue classes of H mod p, in increasing residue order
    std::map<Int, std::vector<Int>> classes;
    for (Int h : shifts) classes[h % p].push_back(h);

    Rational value;
    DensityStep step;
    if (classes.size() > 1) {
        step.kind = DensityStep::Kind::split;
        for (const auto& [residue, members] : classes) {
            std::size_t child = 0;
            value += recurse(p, members, depth + 1, depth_cap, trace, trace ? &child : nullptr);
            if (trace) step.children.push_back(child);
        }
    } else {
        const Int offset = classes.begin()->first;
        const std::vector<Int> reduced = rescaled(shifts, p, offset);
        std::size_t child = 0;
        const Rational inner =
            recurse(p, reduced, depth + 1, depth_cap, trace, trace ? &child : nullptr);
        // p·N^{H1} - offset for |H| even, p·(N^{H1})^c - offset for |H| odd
        value = (shifts.size() % 2 == 0 ? inner : Rational(1) - inner) / Rational(p);
        step.kind = DensityStep::Kind::rescale;
        step.offset = offset;
        if (trace) step.children.push_back(child);
    }

    if (trace) {
        step.shifts = ShiftSet(std::vector<Int>(shifts.begin(), shifts.end()));
        step.value = value;
        record(std::move(step));
    } else {
        std::lock_guard lock(mutex_);
        memo_.insert_or_assign(std::move(key), value);
    }
    return value;
}

void LocalDensitySolver::clear() {
    std::lock_guard lock(mutex_);
    memo_.clear();
}

std::size_t LocalDensitySolver::memo_size() const {
    std::lock_guard lock(mutex_);
    return memo_.size();
}

Rational replay(Int prime, const DensityTrace& trace) {
    if (trace.empty()) throw InvalidArgument("empty density trace");
    for (std::size_t i = 0; i < trace.size(); ++i) {
        const DensityStep& step = trace[i];
        for (std::size_t c : step.children)
            if (c >= i) throw InvalidArgument("density trace step refers forward");
        Rational expected;
        switch (step.kind) {
        case DensityStep::Kind::empty:
            expected = 0;
            break;
        case DensityStep::Kind::singleton:
            expected = singleton_density(prime);
            break;
        case DensityStep::Kind::split:
            for (std::size_t c : step.children) expected += trace[c].value;
            break;
        case DensityStep::Kind::rescale: {
            if (step.children.size() != 1) throw InvalidArgument("rescale step needs one child");
            const Rational& inner = trace[step.children.front()].value;
            expected = (step.shifts.size() % 2 == 0 ? inner : Rational(1) - inner) / Rational(prime);
            break;
        }
        }
        if (expected != step.value)
            throw InvalidArgument("density trace step " + std::to_string(i) + " does not replay");
    }
    return trace.back().value;
}

LocalDensitySolver& default_density_solver() {
    static LocalDensitySolver solver;
    return solver;
}

Rational eta_local(Int p, const ShiftSet& shifts) { return default_density_solver().eta(p, shifts); }

LocalDensity eta_local_traced(Int p, const ShiftSet& shifts) {
    return default_density_solver().solve(p, shifts, true);
}

std::optional<Rational> eta_local_fast(Int p, const ShiftSet& shifts) {
    if (p < 2 || !is_non_exceptional(p, shifts)) return std::nullopt;
    return Rational(static_cast<Int>(shifts.size()), p + 1);
}

Rational eta_set(std::span<const Int> primes, const ShiftSet& shifts) {
    Rational eta = 0;
    for (Int p : primes) {
        const Rational local = eta_local(p, shifts);
        eta = eta * (Rational(1) - local) + local * (Rational(1) - eta);
    }
    return eta;
}

Rational eta_set(const PrimeSet& primes, const ShiftSet& shifts) {
    return eta_set(primes.values(), shifts);
}

} // namespace lpcorr
