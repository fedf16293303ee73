#include "cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "cbeta/dimension.hpp"
#include "cbeta/io.hpp"
#include "cbeta/ldp.hpp"
#include "cbeta/measure.hpp"
#include "cbeta/opuc.hpp"
#include "cbeta/parallel.hpp"
#include "cbeta/stats.hpp"
#include "cbeta/verblunsky.hpp"

namespace cbeta::cli {
namespace {

using json = nlohmann::ordered_json;

struct Artifact
{
    json result = json::object();
    std::optional<CsvWriter> csv;
    std::string summary;
    int exit_code = kSuccess;
};

std::string fmt(double v)
{
    if (!std::isfinite(v))
        return format_double(v);
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

json number(double v)
{
    return std::isfinite(v) ? json(v) : json(nullptr);
}

json optional_number(std::optional<double> v)
{
    return v ? number(*v) : json(nullptr);
}

std::string optional_text(std::optional<double> v)
{
    return v ? fmt(*v) : std::string("n/a");
}

bool uses_measure(std::string const& command)
{
    return command == "sample" || command == "dimension" || command == "ldp-path" || command == "ldp-rate" ||
           command == "upsilon" || command == "bs-density" || command == "cmv-check";
}

bool allows_qtheta(std::string const& command)
{
    return command == "sample" || command == "bs-density" || command == "cmv-check";
}

std::size_t default_n_max(std::string const& command)
{
    if (command == "dimension")
        return 1 << 17;
    if (command == "ldp-path" || command == "upsilon")
        return 100000;
    if (command == "martingale")
        return 64;
    if (command == "bs-density")
        return 32;
    return 16;
}

std::size_t default_trials(std::string const& command)
{
    if (command == "dimension" || command == "upsilon")
        return 200;
    if (command == "ldp-rate")
        return 10000;
    if (command == "martingale")
        return 100000;
    if (command == "moments")
        return 1000000;
    return 1;
}

std::size_t default_grid(std::string const& command)
{
    if (command == "ldp-path")
        return 1001;
    if (command == "bs-density")
        return 4096;
    return 257;
}

// Fills the per-command defaults so that the artifact records every value used.
RunConfig resolve(RunConfig c)
{
    if (!c.n_max)
        c.n_max = default_n_max(c.command);
    if (!c.trials)
        c.trials = default_trials(c.command);
    if (!c.grid_resolution)
        c.grid_resolution = default_grid(c.command);
    if (c.command == "ldp-rate" && c.n_ladder.empty())
        c.n_ladder = {1 << 12, 1 << 14, 1 << 16};
    return c;
}

MeasureTag measure_tag(RunConfig const& c)
{
    if (c.measure == "q0")
        return MeasureTag::q0();
    if (c.measure == "qtheta")
        return MeasureTag::q_theta(*c.theta);
    return MeasureTag::q();
}

MeasureKind measure_kind(RunConfig const& c)
{
    return measure_tag(c).kind;
}

json config_json(RunConfig const& c)
{
    json j;
    j["command"] = c.command;
    j["beta"] = c.beta;
    j["n_max"] = *c.n_max;
    j["trials"] = *c.trials;
    j["measure"] = c.measure;
    j["theta"] = optional_number(c.theta);
    j["seed"] = c.seed;
    j["workers"] = c.workers;
    j["out_format"] = c.out_format;
    j["out_path"] = c.out_path;
    j["grid_resolution"] = *c.grid_resolution;
    j["truncate_delta"] = optional_number(c.truncate_delta);
    j["k"] = c.k;
    j["stream_id"] = c.stream_id;
    j["bins"] = c.bins;
    j["n_ladder"] = c.n_ladder;
    j["override"] = c.override_cap;
    return j;
}

int abort_status(std::size_t aborts, std::size_t trials)
{
    return static_cast<double>(aborts) > kAbortFractionLimit * static_cast<double>(trials) ? kAbortThresholdExceeded
                                                                                          : kSuccess;
}

std::vector<Complex> original_coefficients(RunConfig const& c, std::size_t count)
{
    RadialLaw const law = RadialLaw::cbeta(c.beta, c.truncate_delta);
    VerblunskySequence const seq = sample_sequence(law, measure_tag(c), count, c.seed, c.stream_id);
    if (seq.kind == CoefficientKind::Modified)
        return modified_to_original(seq.coeffs);
    return seq.coeffs;
}

Artifact cmd_sample(RunConfig const& c)
{
    RadialLaw const law = RadialLaw::cbeta(c.beta, c.truncate_delta);
    VerblunskySequence const seq = sample_sequence(law, measure_tag(c), *c.n_max, c.seed, c.stream_id);
    Artifact a;
    a.csv.emplace(std::vector<std::string>{"index", "re", "im"});
    json coeffs = json::array();
    double max_mod = 0.0;
    for (std::size_t i = 0; i < seq.coeffs.size(); ++i)
    {
        Complex const z = seq.coeffs[i];
        coeffs.push_back({z.real(), z.imag()});
        a.csv->add_row({static_cast<double>(i), z.real(), z.imag()});
        max_mod = std::max(max_mod, std::abs(z));
    }
    a.result["law"] = law.describe();
    a.result["measure"] = seq.measure.name();
    a.result["coefficient_kind"] = seq.kind == CoefficientKind::Original ? "original" : "modified";
    a.result["coeffs"] = std::move(coeffs);
    a.summary = "sample: " + std::to_string(seq.coeffs.size()) + " coefficients under " + seq.measure.name() +
                ", max modulus " + fmt(max_mod);
    return a;
}

Artifact cmd_dimension(RunConfig const& c)
{
    DimensionOptions o;
    o.beta = c.beta;
    o.n_max = *c.n_max;
    o.trials = *c.trials;
    o.measure = measure_kind(c);
    o.seed = c.seed;
    o.workers = c.workers;
    o.truncate_delta = c.truncate_delta;
    DimensionReport const r = run_dimension_experiment(o);

    Artifact a;
    a.result["beta"] = c.beta;
    a.result["measure"] = c.measure;
    a.result["n_max"] = o.n_max;
    a.result["trials"] = o.trials;
    a.result["c_mean"] = number(r.c_mean);
    a.result["c_sd"] = number(r.c_sd);
    a.result["d_mean"] = number(r.d_mean);
    a.result["d_sd"] = number(r.d_sd);
    a.result["s0_hat"] = optional_number(r.s0_hat);
    a.result["s0_expected"] = c.beta > 2.0 ? json(1.0 - 2.0 / c.beta) : json(nullptr);
    a.result["aborts"] = r.aborts;
    a.result["seed"] = c.seed;
    a.result["checkpoints"] = r.checkpoints;
    if (!r.s0_hat)
        a.result["dimension_note"] = "not interpretable: needs beta > 2 and slope means below 1";

    a.csv.emplace(std::vector<std::string>{"trajectory", "c", "d"});
    for (std::size_t i = 0; i < r.c_values.size(); ++i)
        a.csv->add_row({static_cast<double>(i), r.c_values[i], r.d_values[i]});

    auto const m = static_cast<double>(std::max<std::size_t>(1, r.c_values.size()));
    a.summary = "dimension: s0_hat = " + (r.s0_hat ? fmt(*r.s0_hat) : std::string("n/a")) + " (c = " +
                fmt(r.c_mean) + " +- " + fmt(r.c_sd / std::sqrt(m)) + ", d = " + fmt(r.d_mean) + " +- " +
                fmt(r.d_sd / std::sqrt(m)) + ", aborts " + std::to_string(r.aborts) + ")";
    a.exit_code = abort_status(r.aborts, o.trials);
    return a;
}

Artifact cmd_ldp_path(RunConfig const& c)
{
    std::size_t const n = *c.n_max;
    std::vector<double> const times = uniform_times(*c.grid_resolution - 1);
    Artifact a;
    LogModulusPath path;
    try
    {
        path = run_log_modulus_path(n, measure_kind(c), c.beta, c.seed, c.stream_id);
    }
    catch (NumericAbort const& e)
    {
        a.result["aborted"] = e.what();
        a.csv.emplace(std::vector<std::string>{"t", "z"});
        a.summary = std::string("ldp-path: trajectory aborted: ") + e.what();
        a.exit_code = kAbortThresholdExceeded;
        return a;
    }
    std::vector<double> const z = zn_values(path, TimeScale(n), times);
    double const ups = upsilon(n, path.log_norm);
    std::optional<double> lmax;
    if (times.size() >= 1001)
        lmax = laplace_max(times, z);

    a.result["n"] = n;
    a.result["measure"] = c.measure;
    a.result["upsilon"] = number(ups);
    a.result["laplace_max"] = optional_number(lmax);
    a.result["t"] = times;
    a.result["z"] = z;
    a.csv.emplace(std::vector<std::string>{"t", "z"});
    for (std::size_t i = 0; i < times.size(); ++i)
        a.csv->add_row({times[i], z[i]});
    a.summary = "ldp-path: Z_n(1) = " + fmt(z.back()) + ", upsilon = " + fmt(ups) +
                ", laplace max = " + (lmax ? fmt(*lmax) : std::string("n/a"));
    return a;
}

Artifact cmd_ldp_rate(RunConfig const& c)
{
    EmpiricalRateOptions o;
    o.n_ladder = c.n_ladder;
    o.trials = *c.trials;
    o.bins = c.bins;
    o.measure = measure_kind(c);
    o.beta = c.beta;
    o.seed = c.seed;
    o.workers = c.workers;
    std::vector<RateCurve> const curves = empirical_rate(o);

    Artifact a;
    a.csv.emplace(std::vector<std::string>{"x", "empirical_rate", "analytic_rate", "n", "count"});
    json out = json::array();
    std::size_t aborts = 0;
    for (auto const& cv : curves)
    {
        json j;
        j["n"] = cv.n;
        j["trials"] = cv.trials;
        j["aborts"] = cv.aborts;
        j["upsilon_mean"] = number(cv.upsilon_mean);
        j["upsilon_sd"] = number(cv.upsilon_sd);
        j["log_norm_variance"] = number(cv.log_norm_variance);
        j["argmin"] = optional_number(cv.argmin);
        j["curvature"] = optional_number(cv.curvature);
        json pts = json::array();
        for (auto const& p : cv.points)
        {
            pts.push_back({{"x", p.x}, {"empirical_rate", p.empirical}, {"analytic_rate", p.analytic},
                           {"count", p.count}});
            a.csv->add_row({p.x, p.empirical, p.analytic, static_cast<double>(p.n), static_cast<double>(p.count)});
        }
        j["points"] = std::move(pts);
        out.push_back(std::move(j));
        aborts += cv.aborts;
    }
    double const zero = o.measure == MeasureKind::Q ? 1.0 + 2.0 / c.beta : 1.0 - 2.0 / c.beta;
    a.result["analytic_zero"] = zero;
    a.result["analytic_curvature"] = c.beta / 4.0;
    a.result["curves"] = std::move(out);
    auto const& last = curves.back();
    a.summary = "ldp-rate: n = " + std::to_string(last.n) + " argmin = " + optional_text(last.argmin) +
                " (zero " + fmt(zero) + "), curvature = " + optional_text(last.curvature) + " (analytic " +
                fmt(c.beta / 4.0) + ")";
    a.exit_code = abort_status(aborts, o.trials * curves.size());
    return a;
}

Artifact cmd_upsilon(RunConfig const& c)
{
    std::size_t const n = *c.n_max;
    std::size_t const trials = *c.trials;
    MeasureKind const kind = measure_kind(c);
    if (n < 2)
        throw std::invalid_argument("upsilon: n-max must be at least 2");
    auto blocks = run_blocks<std::vector<double>>(trials, 16, c.workers, [&](std::size_t begin, std::size_t end) {
        std::vector<double> out;
        for (std::size_t t = begin; t < end; ++t)
        {
            try
            {
                out.push_back(sample_log_norm(n, kind, c.beta, c.seed, t));
            }
            catch (NumericAbort const&)
            {
                out.push_back(std::numeric_limits<double>::quiet_NaN());
            }
        }
        return out;
    });

    Artifact a;
    a.csv.emplace(std::vector<std::string>{"trajectory", "upsilon", "log_norm"});
    RunningStats ups, norms;
    std::size_t aborts = 0, index = 0;
    for (auto const& b : blocks)
    {
        for (double v : b)
        {
            if (std::isnan(v))
                ++aborts;
            else
            {
                ups.add(upsilon(n, v));
                norms.add(v);
                a.csv->add_row({static_cast<double>(index), upsilon(n, v), v});
            }
            ++index;
        }
    }
    double const expected = kind == MeasureKind::Q ? 1.0 + 2.0 / c.beta : 1.0 - 2.0 / c.beta;
    a.result["n"] = n;
    a.result["measure"] = c.measure;
    a.result["trials"] = trials;
    a.result["aborts"] = aborts;
    a.result["mean"] = number(ups.mean());
    a.result["stderr"] = number(ups.stderr_of_mean());
    a.result["sd"] = number(ups.stddev());
    a.result["log_norm_variance"] = number(norms.variance());
    a.result["expected_mean"] = expected;
    a.result["expected_log_norm_variance"] = 4.0 / c.beta * std::log(static_cast<double>(n));
    a.summary = "upsilon: mean = " + fmt(ups.mean()) + " +- " + fmt(ups.stderr_of_mean()) + " (limit " +
                fmt(expected) + ")";
    a.exit_code = abort_status(aborts, trials);
    return a;
}

Artifact cmd_martingale(RunConfig const& c)
{
    MartingaleOptions o;
    o.n_max = *c.n_max;
    o.trials = *c.trials;
    o.beta = c.beta;
    o.seed = c.seed;
    o.workers = c.workers;
    o.override_cap = c.override_cap;
    auto const rows = martingale_check(o);

    Artifact a;
    a.csv.emplace(std::vector<std::string>{"n", "mean", "stderr", "pass"});
    json jr = json::array();
    std::size_t passed = 0;
    for (auto const& r : rows)
    {
        jr.push_back({{"n", r.n}, {"mean", number(r.mean)}, {"stderr", number(r.stderr_)}, {"pass", r.pass}});
        a.csv->add_row({std::to_string(r.n), format_double(r.mean), format_double(r.stderr_), r.pass ? "1" : "0"});
        passed += r.pass ? 1 : 0;
    }
    a.result["rows"] = std::move(jr);
    a.result["all_pass"] = passed == rows.size();
    auto const& last = rows.back();
    a.summary = "martingale: n = " + std::to_string(last.n) + " mean = " + fmt(last.mean) + " +- " +
                fmt(last.stderr_) + "; " + std::to_string(passed) + "/" + std::to_string(rows.size()) +
                " rows within 3 SE of 1";
    return a;
}

json line_json(IdentityLine const& l)
{
    return {{"estimate", number(l.lhs)}, {"stderr", number(l.lhs_stderr)}, {"oracle", l.rhs}, {"pass", l.pass}};
}

Artifact cmd_moments(RunConfig const& c)
{
    std::size_t const trials = *c.trials;
    if (trials < 2)
        throw std::invalid_argument("moments: trials must be at least 2");
    MomentReport const m = moment_check(c.k, c.beta, trials, c.seed, c.workers);
    Q0IdentityReport const q = q0_identity_check(c.k, c.beta, trials, c.seed, c.workers);

    Artifact a;
    a.csv.emplace(std::vector<std::string>{"quantity", "estimate", "stderr", "oracle", "pass"});
    auto row = [&](std::string const& name, IdentityLine const& l) {
        a.csv->add_row({name, format_double(l.lhs), format_double(l.lhs_stderr), format_double(l.rhs),
                        l.pass ? "1" : "0"});
    };
    row("abs2", m.second);
    row("abs4", m.fourth);
    row("q0_re", q.real_part);
    row("q0_2im2", q.imag_square);
    for (std::size_t i = 0; i < q.powers.size(); ++i)
    {
        row("q0_re_pow" + std::to_string(i + 1), q.powers[i]);
        row("q0_im_pow" + std::to_string(i + 1), q.powers_imag[i]);
    }

    a.result["k"] = c.k;
    a.result["beta"] = c.beta;
    a.result["trials"] = trials;
    a.result["abs2"] = line_json(m.second);
    a.result["abs4"] = line_json(m.fourth);
    a.result["q0_real_part"] = line_json(q.real_part);
    a.result["q0_imag_square"] = line_json(q.imag_square);
    json pw = json::array();
    for (std::size_t i = 0; i < q.powers.size(); ++i)
        pw.push_back({{"m", i + 1}, {"real", line_json(q.powers[i])}, {"imag", line_json(q.powers_imag[i])}});
    a.result["q0_powers"] = std::move(pw);
    a.summary = "moments: E|alpha_" + std::to_string(c.k) + "|^2 = " + fmt(m.second.lhs) + " +- " +
                fmt(m.second.lhs_stderr) + " vs oracle " + fmt(m.second.rhs);
    return a;
}

Artifact cmd_bs_density(RunConfig const& c, std::ostream& err)
{
    std::vector<Complex> const alphas = original_coefficients(c, *c.n_max);
    BsDensity const d = bs_density(alphas, *c.grid_resolution);
    if (d.normalization_warning)
        err << "warning: Bernstein-Szego mass " << fmt(d.total_mass) << " drifts from 1; refine the grid\n";

    Artifact a;
    a.csv.emplace(std::vector<std::string>{"theta", "density", "cumulative"});
    for (std::size_t i = 0; i < d.grid.size(); ++i)
        a.csv->add_row({d.grid[i], d.values[i], d.cumulative[i]});
    a.result["level"] = d.level;
    a.result["total_mass"] = d.total_mass;
    a.result["normalization_warning"] = d.normalization_warning;
    a.result["theta"] = d.grid;
    a.result["density"] = d.values;
    a.result["cumulative"] = d.cumulative;
    a.summary = "bs-density: n = " + std::to_string(d.level) + ", total mass = " + fmt(d.total_mass);
    return a;
}

Artifact cmd_cmv_check(RunConfig const& c)
{
    std::size_t const n = *c.n_max;
    std::vector<Complex> coeffs = original_coefficients(c, n - 1);
    // Terminal unit-modulus coefficient from the same stream, after the
    // two uniforms consumed per interior coefficient.
    RandomStream rng(c.seed, c.stream_id);
    for (std::size_t i = 0; i < 2 * (n - 1); ++i)
        rng.uniform();
    coeffs.push_back(std::polar(1.0, kTwoPi * rng.uniform()));
    CmvMatrix const m = build_cmv(coeffs);

    Artifact a;
    a.csv.emplace(std::vector<std::string>{"row", "col", "re", "im"});
    json entries = json::array();
    for (Eigen::Index i = 0; i < m.entries.rows(); ++i)
    {
        for (Eigen::Index j = 0; j < m.entries.cols(); ++j)
        {
            Complex const v = m.entries(i, j);
            entries.push_back({v.real(), v.imag()});
            a.csv->add_row({static_cast<double>(i), static_cast<double>(j), v.real(), v.imag()});
        }
    }
    double const err = m.unitarity_error();
    std::size_t const bw = m.bandwidth();
    a.result["size"] = m.size;
    a.result["unitarity_error"] = err;
    a.result["bandwidth"] = bw;
    a.result["entries"] = std::move(entries);
    a.summary = "cmv-check: size " + std::to_string(m.size) + ", unitarity error " + fmt(err) + ", bandwidth " +
                std::to_string(bw);
    return a;
}

}  // namespace

std::vector<std::string> const& command_names()
{
    static std::vector<std::string> const names{"sample",     "dimension", "ldp-path",   "ldp-rate", "upsilon",
                                                "martingale", "moments",   "bs-density", "cmv-check"};
    return names;
}

void validate(RunConfig const& raw)
{
    auto const& names = command_names();
    if (std::find(names.begin(), names.end(), raw.command) == names.end())
        throw std::invalid_argument("unknown command '" + raw.command + "'");
    RunConfig const c = resolve(raw);
    if (!(c.beta > 0.0) || !std::isfinite(c.beta))
        throw std::invalid_argument("--beta must be positive");
    if (c.measure != "q" && c.measure != "q0" && c.measure != "qtheta")
        throw std::invalid_argument("--measure must be q, q0 or qtheta");
    if (c.measure == "qtheta" && !c.theta)
        throw std::invalid_argument("--measure qtheta needs --theta");
    if (c.theta && c.measure != "qtheta")
        throw std::invalid_argument("--theta is only valid with --measure qtheta");
    if (c.measure != "q" && !uses_measure(c.command))
        throw std::invalid_argument("command '" + c.command + "' does not take --measure");
    if (c.measure == "qtheta" && !allows_qtheta(c.command))
        throw std::invalid_argument("command '" + c.command + "' supports only q and q0");
    if (c.out_format != "csv" && c.out_format != "json")
        throw std::invalid_argument("--out-format must be csv or json");
    if (*c.n_max == 0 || *c.trials == 0 || c.bins < 3)
        throw std::invalid_argument("counts must be positive and --bins at least 3");
    if (*c.grid_resolution < 3)
        throw std::invalid_argument("--grid-resolution must be at least 3");
    if (c.truncate_delta && !(*c.truncate_delta > 0.0 && *c.truncate_delta < 1.0))
        throw std::invalid_argument("--truncate-delta must lie in (0, 1)");
    if (c.command == "dimension" && *c.n_max < 512)
        throw std::invalid_argument("dimension: --n-max must be at least 512");
    if ((c.command == "ldp-path" || c.command == "upsilon") && *c.n_max < 2)
        throw std::invalid_argument(c.command + ": --n-max must be at least 2");
    if (c.command == "ldp-rate")
    {
        for (std::size_t n : c.n_ladder)
        {
            if (n < 2)
                throw std::invalid_argument("ldp-rate: every --n-ladder horizon must be at least 2");
        }
    }
    if (c.command == "martingale" && *c.n_max > 256 && !c.override_cap)
        throw std::invalid_argument("martingale: --n-max above 256 needs --override");
    if (c.command == "moments" && *c.trials < 2)
        throw std::invalid_argument("moments: --trials must be at least 2");
}

int dispatch(RunConfig const& raw, std::ostream& out, std::ostream& err)
{
    try
    {
        validate(raw);
    }
    catch (std::exception const& e)
    {
        err << "error: " << e.what() << "\n";
        return kValidationFailure;
    }
    RunConfig const c = resolve(raw);
    bool const to_stdout = c.out_path == "-";
    if (!to_stdout)
    {
        std::ofstream probe(c.out_path, std::ios::binary | std::ios::trunc);
        if (!probe)
        {
            err << "error: cannot write " << c.out_path << "\n";
            return kValidationFailure;
        }
    }

    Artifact a;
    try
    {
        if (c.command == "sample")
            a = cmd_sample(c);
        else if (c.command == "dimension")
            a = cmd_dimension(c);
        else if (c.command == "ldp-path")
            a = cmd_ldp_path(c);
        else if (c.command == "ldp-rate")
            a = cmd_ldp_rate(c);
        else if (c.command == "upsilon")
            a = cmd_upsilon(c);
        else if (c.command == "martingale")
            a = cmd_martingale(c);
        else if (c.command == "moments")
            a = cmd_moments(c);
        else if (c.command == "bs-density")
            a = cmd_bs_density(c, err);
        else
            a = cmd_cmv_check(c);
    }
    catch (NumericAbort const& e)
    {
        err << "error: " << e.what() << "\n";
        return kAbortThresholdExceeded;
    }
    catch (std::exception const& e)
    {
        err << "error: " << e.what() << "\n";
        return kValidationFailure;
    }

    json meta;
    meta["format_version"] = kFormatVersion;
    meta["config"] = config_json(c);

    try
    {
        std::string body;
        if (c.out_format == "json")
        {
            json doc = meta;
            doc["result"] = std::move(a.result);
            body = doc.dump(2) + "\n";
        }
        else
        {
            body = a.csv->str();
            if (!to_stdout)
                write_text_file(c.out_path + ".meta.json", meta.dump(2) + "\n");
        }
        if (to_stdout)
            out << body;
        else
            write_text_file(c.out_path, body);
    }
    catch (std::exception const& e)
    {
        err << "error: " << e.what() << "\n";
        return kValidationFailure;
    }

    (to_stdout ? err : out) << a.summary << "\n";
    return a.exit_code;
}

int run(int argc, char const* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Monte Carlo experiments for CbetaE Verblunsky coefficients and their orthogonal polynomials"};
    app.name("cbeta-opuc");
    RunConfig c;

    std::string command_help = "experiment to run:";
    for (auto const& n : command_names())
        command_help += " " + n;
    app.add_option("command", c.command, command_help)->required();
    app.add_option("--beta", c.beta, "ensemble parameter beta > 0");
    app.add_option("--n-max", c.n_max, "horizon or number of coefficients");
    app.add_option("--trials", c.trials, "number of Monte Carlo trajectories or samples");
    app.add_option("--measure", c.measure, "q, q0 or qtheta");
    app.add_option("--theta", c.theta, "angle for --measure qtheta");
    app.add_option("--seed", c.seed, "master seed");
    app.add_option("--workers", c.workers, "worker threads (0: CBETA_OPUC_THREADS or all cores)");
    app.add_option("--out-format", c.out_format, "csv or json");
    app.add_option("--out-path", c.out_path, "artifact path, '-' for stdout");
    app.add_option("--grid-resolution", c.grid_resolution, "angle or time grid size");
    app.add_option("--truncate-delta", c.truncate_delta, "clamp coefficient radii at 1 - delta");
    app.add_option("--k", c.k, "coefficient index for moments");
    app.add_option("--stream-id", c.stream_id, "trajectory stream for single-trajectory commands");
    app.add_option("--bins", c.bins, "histogram bins for ldp-rate");
    app.add_option("--n-ladder", c.n_ladder, "horizons for ldp-rate")->delimiter(',');
    app.add_flag("--override", c.override_cap, "lift the martingale n-max cap");

    try
    {
        app.parse(argc, argv);
    }
    catch (CLI::CallForHelp const&)
    {
        out << app.help();
        return kSuccess;
    }
    catch (CLI::ParseError const& e)
    {
        err << "error: " << e.what() << "\n";
        return kValidationFailure;
    }
    return dispatch(c, out, err);
}

}  // namespace cbeta::cli
