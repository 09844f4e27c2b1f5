#include "lpcorr/cli.hpp"

#include <algorithm>
#include <charconv>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "lpcorr/density.hpp"
#include "lpcorr/errors.hpp"
#include "lpcorr/gf2.hpp"
#include "lpcorr/rational.hpp"
#include "lpcorr/sieve.hpp"
#include "lpcorr/spectrum.hpp"

namespace lpcorr::cli {

namespace {

using json = nlohmann::ordered_json;

// A rational as it appears in every record: exact and 12-digit decimal.
json rational_json(const Rational& r) { return {{"rational", r.str()}, {"decimal", r.decimal()}}; }

json ints_json(std::span<const Int> v) { return json(std::vector<Int>(v.begin(), v.end())); }

const char* step_kind_name(DensityStep::Kind k) {
    switch (k) {
    case DensityStep::Kind::empty: return "empty";
    case DensityStep::Kind::singleton: return "singleton";
    case DensityStep::Kind::split: return "split";
    case DensityStep::Kind::rescale: return "rescale";
    }
    return "?";
}

std::string trace_line(Int p, const DensityTrace& trace, std::size_t i) {
    const DensityStep& s = trace[i];
    std::ostringstream os;
    os << "[" << i << "] H=" << to_string(s.shifts) << " " << step_kind_name(s.kind) << ": ";
    switch (s.kind) {
    case DensityStep::Kind::empty: os << "0"; break;
    case DensityStep::Kind::singleton: os << "1/(" << p << "+1)"; break;
    case DensityStep::Kind::split:
        for (std::size_t c = 0; c < s.children.size(); ++c) os << (c ? " + " : "") << "[" << s.children[c] << "]";
        break;
    case DensityStep::Kind::rescale: {
        const bool even = s.shifts.size() % 2 == 0;
        os << "(H-" << s.offset << ")/" << p << " -> "
           << (even ? "" : "(1 - ") << "[" << s.children.front() << "]" << (even ? "" : ")") << " / " << p;
        break;
    }
    }
    os << " = " << s.value.str();
    return os.str();
}

struct Output {
    std::ostream& out;
    bool as_json = false;

    void emit(const json& record, const std::string& text) const {
        if (as_json) out << record.dump() << "\n";
        else out << text;
    }
};

struct SieveFlags {
    std::string primes;
    std::string shifts;
    std::string x;
    std::string segment;
    unsigned threads = 1;

    SieveConfig config(const ShiftSet& h, std::string_view stride_text) const {
        SieveConfig cfg;
        cfg.x_max = parse_int(x, "-x");
        cfg.sample_stride = stride_text.empty() ? cfg.x_max : parse_int(stride_text, "--stride");
        cfg.threads = threads;
        if (!segment.empty()) cfg.segment_length = parse_int(segment, "--segment");
        else cfg.segment_length = std::max(cfg.segment_length, h.max() + 1);
        return cfg;
    }
};

int cmd_density(const Output& o, const std::string& prime_text, const std::string& shift_text, bool trace) {
    const Int p = parse_int(prime_text, "-p");
    const ShiftSet h(parse_int_list(shift_text, "-H"));
    const LocalDensity ld = trace ? eta_local_traced(p, h) : LocalDensity{p, h, eta_local(p, h), {}};

    json record = {{"command", "density"}, {"inputs", {{"p", p}, {"H", ints_json(h.values())}}}};
    record["result"]["eta"] = rational_json(ld.value);
    std::string text = "eta=" + ld.value.str() + " decimal=" + ld.value.decimal() + "\n";
    if (ld.trace) {
        json steps = json::array();
        for (std::size_t i = 0; i < ld.trace->size(); ++i) {
            const DensityStep& s = (*ld.trace)[i];
            json step = {{"step", i},
                         {"kind", step_kind_name(s.kind)},
                         {"shifts", ints_json(s.shifts.values())},
                         {"value", s.value.str()},
                         {"children", s.children}};
            if (s.kind == DensityStep::Kind::rescale) step["offset"] = s.offset;
            steps.push_back(std::move(step));
            text += trace_line(p, *ld.trace, i) + "\n";
        }
        record["result"]["trace"] = std::move(steps);
    }
    o.emit(record, text);
    return kOk;
}

int cmd_kappa(const Output& o, const std::string& prime_text, const std::string& shift_text,
              const std::string& tail_text) {
    const PrimeSet primes(parse_int_list(prime_text, "-P"));
    const ShiftSet h(parse_int_list(shift_text, "-H"));
    json record = {{"command", "kappa"},
                   {"inputs", {{"P", ints_json(primes.values())}, {"H", ints_json(h.values())}}}};

    const Correlation kappa = kappa_finite(primes, h);
    json factors = json::array();
    std::string factor_text;
    for (const auto& f : kappa.factors) {
        factors.push_back({{"prime", f.prime}, {"factor", f.factor.str()}});
        factor_text += (factor_text.empty() ? "" : ",") + std::to_string(f.prime) + ":" + f.factor.str();
    }
    record["result"]["kappa"] = rational_json(kappa.value);
    record["result"]["factors"] = std::move(factors);
    std::string text = "kappa=" + kappa.value.str() + " decimal=" + kappa.value.decimal() + "\n";
    if (!factor_text.empty()) text += "factors=" + factor_text + "\n";

    if (!tail_text.empty()) {
        const Rational tail = Rational::parse(tail_text);
        record["inputs"]["tail_sum"] = tail.str();
        const CorrelationInterval iv = kappa_truncated(primes, tail, h);
        record["result"]["interval"] = {{"center", rational_json(iv.center)},
                                        {"radius", rational_json(iv.radius)},
                                        {"lower", rational_json(iv.lower())},
                                        {"upper", rational_json(iv.upper())}};
        text += "center=" + iv.center.str() + " radius=" + iv.radius.str() + " interval=[" +
                iv.lower().str() + "," + iv.upper().str() + "] decimal=[" + iv.lower().decimal() + "," +
                iv.upper().decimal() + "]\n";
    }
    o.emit(record, text);
    return kOk;
}

int cmd_verify(const Output& o, const SieveFlags& flags, const std::string& tol_text) {
    const PrimeSet primes(parse_int_list(flags.primes, "-P"));
    const ShiftSet h(parse_int_list(flags.shifts, "-H"));
    const Rational tol = Rational::parse(tol_text);
    if (tol.sign() < 0) throw InvalidArgument("--tol must be non-negative, got '" + tol_text + "'");
    const SieveConfig cfg = flags.config(h, "");

    const Rational exact = kappa_finite(primes, h).value;
    const SignSeries series = running_average(primes, h, cfg);
    const Rational sieve = series.back().average();
    const Rational diff = abs(sieve - exact);
    const bool pass = diff <= tol;

    json record = {{"command", "verify"},
                   {"inputs",
                    {{"P", ints_json(primes.values())},
                     {"H", ints_json(h.values())},
                     {"x", cfg.x_max},
                     {"tolerance", tol.str()}}},
                   {"result",
                    {{"exact", rational_json(exact)},
                     {"sieve", rational_json(sieve)},
                     {"sum", series.back().sum},
                     {"difference", rational_json(diff)},
                     {"pass", pass}}}};
    const std::string text = "exact=" + exact.str() + " sieve=" + sieve.str() + " difference=" + diff.str() +
                             " tolerance=" + tol.str() + " status=" + (pass ? "pass" : "FAIL") + "\n" +
                             "exact_decimal=" + exact.decimal() + " sieve_decimal=" + sieve.decimal() +
                             " difference_decimal=" + diff.decimal() + "\n";
    o.emit(record, text);
    return pass ? kOk : kVerificationFailed;
}

int cmd_series(const Output& o, const SieveFlags& flags, const std::string& stride_text) {
    const PrimeSet primes(parse_int_list(flags.primes, "-P"));
    const ShiftSet h(parse_int_list(flags.shifts, "-H"));
    const SieveConfig cfg = flags.config(h, stride_text);
    const SignSeries series = running_average(primes, h, cfg);

    json record = {{"command", "series"},
                   {"inputs",
                    {{"P", ints_json(primes.values())},
                     {"H", ints_json(h.values())},
                     {"x", cfg.x_max},
                     {"stride", cfg.sample_stride}}}};
    json samples = json::array();
    std::string text = "x,sum,average\n";
    for (const auto& s : series) {
        const Rational avg = s.average();
        samples.push_back({{"x", s.x}, {"sum", s.sum}, {"average", rational_json(avg)}});
        text += std::to_string(s.x) + "," + std::to_string(s.sum) + "," + avg.decimal() + "\n";
    }
    record["result"]["series"] = std::move(samples);
    o.emit(record, text);
    return kOk;
}

int cmd_spectrum(const Output& o, const std::string& shift_text) {
    const ShiftSet h(parse_int_list(shift_text, "-H"));
    const SpectrumDescription s = spectrum_describe(h);
    json record = {{"command", "spectrum"},
                   {"inputs", {{"H", ints_json(h.values())}}},
                   {"result",
                    {{"alpha", rational_json(s.alpha)},
                     {"witness", s.witness_prime},
                     {"interval", {rational_json(s.lower), rational_json(s.upper)}}}}};
    o.emit(record, "alpha=" + s.alpha.compact() + " witness=" + std::to_string(s.witness_prime) +
                       " interval=[" + s.lower.compact() + "," + s.upper.compact() + "]\n");
    return kOk;
}

int cmd_construct(const Output& o, const std::string& shift_text, const std::string& target_text,
                  const std::string& eps_text, const std::string& floor_text, const std::string& budget_text) {
    const ShiftSet h(parse_int_list(shift_text, "-H"));
    const Rational target = Rational::parse(target_text);
    const Rational eps = Rational::parse(eps_text);
    ConstructOptions opts;
    if (!floor_text.empty()) opts.floor = parse_int(floor_text, "--floor");
    if (!budget_text.empty()) {
        const Int budget = parse_int(budget_text, "--budget");
        if (budget < 1) throw InvalidArgument("--budget must be positive, got '" + budget_text + "'");
        opts.prime_budget = static_cast<std::size_t>(budget);
    }

    const PrimeSet primes = construct_target(h, target, eps, opts);
    const Rational achieved = kappa_finite(primes, h).value;
    const Rational error = abs(achieved - target);
    const bool within = error <= eps;

    json record = {{"command", "construct"},
                   {"inputs", {{"H", ints_json(h.values())}, {"target", target.str()}, {"eps", eps.str()}}},
                   {"result",
                    {{"P", ints_json(primes.values())},
                     {"kappa", rational_json(achieved)},
                     {"error", rational_json(error)},
                     {"within_tolerance", within}}}};
    if (opts.floor >= 0) record["inputs"]["floor"] = opts.floor;
    o.emit(record, "P=" + to_string(primes) + "\nkappa=" + achieved.str() + " decimal=" + achieved.decimal() +
                       " error=" + error.decimal() + " eps=" + eps.decimal() +
                       " status=" + (within ? "pass" : "FAIL") + "\n");
    return within ? kOk : kVerificationFailed;
}

int cmd_closure(const Output& o, const std::vector<std::string>& generator_texts) {
    std::vector<ShiftSet> sets;
    for (const auto& g : generator_texts) sets.emplace_back(parse_int_list(g, "-G"));
    const ClosureFamily fam = family_from_generators(sets);
    const TwoElementMember member = two_element_member(fam);

    json gens = json::array();
    for (const auto& s : sets) gens.push_back(ints_json(s.values()));
    const std::string d = member.distance.get_str();
    const std::optional<ShiftSet> pair = member.as_shift_set();
    const std::string member_text =
        pair ? to_string(*pair)
             : "{0,(2^" + std::to_string(member.r) + "-1)*2^" + std::to_string(member.n) + "}";

    std::string certificate;
    constexpr long kExplicitQuotientLimit = 4096;
    if (member.distance <= kExplicitQuotientLimit) {
        const F2Poly target = F2Poly::monomial(member.distance.get_ui()) + F2Poly::one();
        const F2DivMod qr = divmod(target, fam.generator);
        certificate = target.str() + " = (" + fam.generator.str() + ")*(" + qr.quotient.str() + ")";
        if (!qr.remainder.is_zero()) throw Error("internal: explicit certificate has a remainder");
    } else {
        certificate = "t^D mod (" + fam.generator.str() + ") = 1";
    }

    json record = {{"command", "closure"},
                   {"inputs", {{"generators", std::move(gens)}}},
                   {"result",
                    {{"generator", fam.generator.str()},
                     {"t_valuations", fam.t_valuations},
                     {"distance", d},
                     {"r", member.r},
                     {"m", member.m},
                     {"n", member.n},
                     {"degenerate", member.degenerate},
                     {"certificate", certificate}}}};
    std::string text = "generator=" + fam.generator.str() + "\nmember=" + member_text +
                       " r=" + std::to_string(member.r) + " m=" + std::to_string(member.m) +
                       " n=" + std::to_string(member.n) + "\n";
    if (member.degenerate) text += "degenerate: closure is the full ideal, {0,1} certified by f | t+1\n";
    text += "certificate: " + certificate + "\n";
    o.emit(record, text);
    return kOk;
}

} // namespace

Int parse_int(std::string_view text, std::string_view flag) {
    Int value = 0;
    const auto* first = text.data();
    const auto* last = text.data() + text.size();
    if (!text.empty() && text.front() == '+') ++first;
    if (auto [ptr, ec] = std::from_chars(first, last, value); ec == std::errc() && ptr == last && first != last)
        return value;
    // exact forms like 1e7
    try {
        const Rational r = Rational::parse(text);
        if (r.is_integer() && r.numerator().fits_slong_p()) return r.numerator().get_si();
    } catch (const InvalidArgument&) {
    }
    throw InvalidArgument("invalid integer '" + std::string(text) + "' for " + std::string(flag));
}

std::vector<Int> parse_int_list(std::string_view text, std::string_view flag) {
    std::vector<Int> out;
    if (text.empty()) return out;
    std::size_t pos = 0;
    while (true) {
        const std::size_t comma = text.find(',', pos);
        const std::string_view token = text.substr(pos, comma == std::string_view::npos ? text.npos : comma - pos);
        Int value = 0;
        auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
        if (token.empty() || ec != std::errc() || ptr != token.data() + token.size())
            throw InvalidArgument("invalid integer '" + std::string(token) + "' in " + std::string(flag) +
                                  " list '" + std::string(text) + "'");
        out.push_back(value);
        if (comma == std::string_view::npos) break;
        pos = comma + 1;
    }
    return out;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Exact and sieved correlations of completely multiplicative ±1 functions", "lpcorr"};
    app.require_subcommand(1);
    app.fallthrough();
    bool as_json = false;
    app.add_flag("--json", as_json, "Emit one JSON object instead of text");

    std::string prime, primes, shifts, tail, tol, stride, target, eps, floor, budget;
    bool trace = false;
    SieveFlags sieve_flags;
    std::vector<std::string> generators;

    auto* density = app.add_subcommand("density", "Local density eta_p^H as an exact rational");
    density->add_option("-p,--prime", prime, "Prime p")->required();
    density->add_option("-H,--shifts", shifts, "Comma-separated shifts")->required();
    density->add_flag("--trace", trace, "Print the recursion steps");

    auto* kappa = app.add_subcommand("kappa", "Correlation kappa_P^H for a finite prime set");
    kappa->add_option("-P,--primes", primes, "Comma-separated primes ('' for none)")->required();
    kappa->add_option("-H,--shifts", shifts, "Comma-separated shifts")->required();
    kappa->add_option("--tail", tail, "Upper bound on sum 1/(p+1) over omitted primes");

    auto add_sieve_flags = [&](CLI::App* sub) {
        sub->add_option("-P,--primes", sieve_flags.primes, "Comma-separated primes ('' for none)")->required();
        sub->add_option("-H,--shifts", sieve_flags.shifts, "Comma-separated shifts")->required();
        sub->add_option("-x", sieve_flags.x, "Sieve limit x")->required();
        sub->add_option("--segment", sieve_flags.segment, "Segment length");
        sub->add_option("--threads", sieve_flags.threads, "Worker threads (results do not depend on it)")
            ->check(CLI::PositiveNumber);
    };
    auto* verify = app.add_subcommand("verify", "Compare the sieved average S(x) with the exact kappa");
    add_sieve_flags(verify);
    verify->add_option("--tol", tol, "Allowed |S(x) - kappa|")->required();

    auto* series = app.add_subcommand("series", "Running averages S(x) as CSV");
    add_sieve_flags(series);
    series->add_option("--stride", stride, "Sample every stride integers (default: x)");

    auto* spectrum = app.add_subcommand("spectrum", "alpha_H, its witness prime and the spectrum interval");
    spectrum->add_option("-H,--shifts", shifts, "Comma-separated shifts")->required();

    auto* construct = app.add_subcommand("construct", "Prime set whose kappa approximates a target");
    construct->add_option("-H,--shifts", shifts, "Comma-separated shifts")->required();
    construct->add_option("--target", target, "Target value (rational or decimal)")->required();
    construct->add_option("--eps", eps, "Tolerance (rational or decimal)")->required();
    construct->add_option("--floor", floor, "Use only primes above this (default max difference)");
    construct->add_option("--budget", budget, "Maximum number of primes examined");

    auto* closure = app.add_subcommand("closure", "Two-element member of a translation/xor closed family");
    closure->add_option("-G,--generator", generators, "Generator set (repeatable)")->required();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }

    const Output o{out, as_json};
    try {
        if (*density) return cmd_density(o, prime, shifts, trace);
        if (*kappa) return cmd_kappa(o, primes, shifts, tail);
        if (*verify) return cmd_verify(o, sieve_flags, tol);
        if (*series) return cmd_series(o, sieve_flags, stride);
        if (*spectrum) return cmd_spectrum(o, shifts);
        if (*construct) return cmd_construct(o, shifts, target, eps, floor, budget);
        if (*closure) return cmd_closure(o, generators);
    } catch (const ResourceLimit& e) {
        err << "error: " << e.what() << "\n";
        return kResourceLimit;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    }
    return kUsage;
}

} // namespace lpcorr::cli
