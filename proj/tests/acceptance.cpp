// Copyright 2026 The adaptq Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Acceptance suite: one line per criterion, nonzero exit if any fails.
//
//   acceptance [--workers N] [--only 1,3,...]

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <functional>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "adaptq/experiments.hpp"
#include "adaptq/oracle.hpp"
#include "adaptq/verify.hpp"

using namespace adaptq;

namespace {

unsigned g_workers = 1;

struct Outcome {
    bool pass;
    std::string detail;
};

std::string fmt(const char *f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

double median_fold(const std::vector<PathSample> &v) {
    std::vector<double> f;
    for (const auto &s : v) f.push_back(fold(s.delta));
    return median(f);
}

ExperimentConfig coupled(SchemeConfig scheme, double Delta, double Delta_nominal, double T, std::uint64_t paths) {
    ExperimentConfig c;
    c.scheme = scheme;
    c.Delta = Delta;
    c.Delta_nominal = Delta_nominal;
    c.horizon = T;
    c.n_paths = paths;
    c.tier = Tier::scalar_coupled;
    return c;
}

// 1. scalar coupled tier vs matrix SME + filter on matched noise
Outcome oracle_equivalence() {
    struct Case {
        SchemeConfig scheme;
        double D, Dn;
    };
    std::vector<Case> cases;
    for (SchemeConfig s : {SchemeConfig{Robust{4.0, 0.5}}, SchemeConfig{Jacobs{1.0}}})
        for (auto [D, Dn] : {std::pair{0.0, 0.0}, {1e-2, 0.0}, {1e-2, 1e-2}}) cases.push_back({s, D, Dn});
    const std::uint64_t n_paths = 100;
    std::vector<TierGap> gaps(cases.size() * n_paths);
    detail::parallel_for(gaps.size(), g_workers, [&](std::uint64_t i) {
        const auto &cs = cases[i / n_paths];
        ExperimentConfig c = coupled(cs.scheme, cs.D, cs.Dn, 1.0, n_paths);
        c.integrator = Integrator::milstein;
        c.substeps = 16;
        gaps[i] = compare_tiers(c, i % n_paths);
    });
    double worst_true = 0.0, worst_nom = 0.0;
    int bad = 0;
    for (const auto &g : gaps) {
        worst_true = std::max(worst_true, g.max_true);
        worst_nom = std::max(worst_nom, g.max_nominal);
        bad += g.max_gap() > 1e-2;
    }
    return {bad == 0, fmt("max gap true %.3g, nominal %.3g over 6 x 100 paths (tol 1e-2), %d paths over", worst_true,
                          worst_nom, bad)};
}

// 2. Jacobs closed form and lognormal tail
Outcome closed_form() {
    const double med = median(jacobs_closed_form_errors(1000, 1.0, 0.1, 1e-4, 42));
    ExperimentConfig c;
    c.scheme = Jacobs{1.0};
    c.horizon = 5.0;
    c.n_paths = 10000;
    const auto term = run_terminal(c, g_workers);
    double below = 0;
    for (const auto &s : term) below += fold(s.delta) < 1e-2;
    const double frac = below / static_cast<double>(term.size());
    return {med <= 5e-2 && frac >= 0.9,
            fmt("median rel. error %.4g (tol 5e-2, 1000 paths, delta0=0.1); fraction below 1e-2 at T=5: %.4f (min 0.9)",
                med, frac)};
}

// 3. folded statistics of both schemes at Delta = 0
Outcome convergence() {
    bool ok = true;
    std::string d;
    for (const auto &run : preset("fig2")) {
        const auto st = run_ensemble(run, g_workers);
        const double mean = st.delta.back().mean, sd = st.delta.back().stddev();
        int rises = 0;
        std::size_t first = 0;
        while (st.t[first] < 0.1 - 1e-12) ++first;
        for (std::size_t i = first + 1; i < st.t.size(); ++i) {
            const double se = std::hypot(st.delta[i].standard_error(), st.delta[i - 1].standard_error());
            rises += st.delta[i].mean > st.delta[i - 1].mean + 2.0 * se;
        }
        const bool pass = mean < 0.05 && sd < 0.1 && rises == 0;
        ok = ok && pass;
        d += fmt("%s: mean(T) %.4g (<0.05), std(T) %.4g (<0.1), rises>2se %d; ", run.name.c_str(), mean, sd, rises);
    }
    return {ok, d};
}

// 4. long-run error proportional to Delta, near the linearized stationary mean
Outcome proportionality() {
    double e[2];
    const double Ds[2] = {1e-2, 1e-3};
    for (int i = 0; i < 2; ++i) {
        ExperimentConfig c;
        c.scheme = Robust{4.0, 0.5};
        c.Delta = Ds[i];
        c.horizon = 5.0;
        e[i] = long_run_error(c, g_workers);
    }
    const double ratio = e[0] / e[1];
    const double r0 = e[0] / (Ds[0] / 4.0), r1 = e[1] / (Ds[1] / 4.0);
    const bool ok = std::abs(ratio / 10.0 - 1.0) <= 0.3 && r0 >= 0.5 && r0 <= 2.0 && r1 >= 0.5 && r1 <= 2.0;
    return {ok, fmt("error(1e-2) %.4g, error(1e-3) %.4g, ratio %.4g (10 +- 30%%), vs Delta/(2 k beta): %.3g, %.3g "
                    "(within x2)",
                    e[0], e[1], ratio, r0, r1)};
}

// 5. alpha = 1/2 maximizes the fidelity drift; Monte Carlo agrees with the drift
Outcome optimality() {
    double worst = 0.0;
    for (double d : {0.1, 0.5, 1.0, 2.0, 3.0}) worst = std::max(worst, std::abs(argmax_alpha(d, 4.0) - 0.5));
    const double delta = kPi / 2.0, dt = 1e-4, k = 4.0;
    const Density rho = state_from_angle(delta);
    Moments inc;
    for (std::uint64_t i = 0; i < 1000000; ++i) {
        const Density next = step_sme(rho, 0.5 * delta, k, 0.0, dt, wiener_increment(7, i, 0, dt), Integrator::milstein);
        inc.add((fidelity_target(next) - fidelity_target(rho)) / dt);
    }
    const double drift = fidelity_drift(delta, 0.5, k, 0.0);
    const bool mc_ok = std::abs(inc.mean - drift) <= 2.0 * inc.standard_error();
    return {worst <= 5e-4 && mc_ok, fmt("max |argmax - 0.5| %.3g (tol 5e-4); MC rate %.4g +- %.3g vs drift %.4g", worst,
                                        inc.mean, inc.standard_error(), drift)};
}

// least-squares slope of the ensemble median of delta over t >= T/2
double median_slope(const std::vector<PathRecord<PathSample>> &paths) {
    const auto &t = paths.front().t;
    double st = 0, sy = 0, stt = 0, sty = 0, n = 0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (t[i] < 0.5 * t.back() - 1e-12) continue;
        std::vector<double> v;
        for (const auto &p : paths) v.push_back(p.state[i].delta);
        const double m = median(v);
        st += t[i];
        sy += m;
        stt += t[i] * t[i];
        sty += t[i] * m;
        n += 1;
    }
    return (n * sty - st * sy) / (n * stt - st * st);
}

// 6. Jacobs drifts away with the wrong Delta', the robust scheme stays close
Outcome robustness() {
    const double Delta = 1e-2;
    auto jc = coupled(Jacobs{1.0}, Delta, 0.0, 10.0, 1000);
    const auto jp = run_sample_paths(jc, jc.n_paths, g_workers);
    std::vector<PathSample> jt;
    for (const auto &p : jp) jt.push_back(p.state.back());
    const double jmed = median_fold(jt), slope = median_slope(jp);
    const double rmed = median_fold(run_terminal(coupled(Robust{4.0, 0.5}, Delta, 0.0, 10.0, 1000), g_workers));
    const bool ok = jmed >= 0.1 && std::abs(slope / (2 * Delta) - 1.0) <= 0.2 && rmed <= 5 * Delta;
    return {ok, fmt("jacobs median fold %.4g (>=0.1), median slope %.4g (2 Delta = %.3g +- 20%%); robust median fold %.4g "
                    "(<=0.05)",
                    jmed, slope, 2 * Delta, rmed)};
}

// 7. stronger Jacobs measurement does not remove the drift
Outcome persistence() {
    bool ok = true;
    std::string d;
    for (double kappa : {5.0, 50.0}) {
        const double m = median_fold(run_terminal(coupled(Jacobs{kappa}, 1e-2, 1e-3, 10.0, 1000), g_workers));
        ok = ok && m >= 0.1;
        d += fmt("jacobs kappa=%g median fold %.4g (>=0.1); ", kappa, m);
    }
    const double r = median_fold(run_terminal(coupled(Robust{4.0, 0.5}, 1e-2, 1e-3, 10.0, 1000), g_workers));
    ok = ok && r <= 0.05;
    d += fmt("robust k=4 median fold %.4g (<=0.05)", r);
    return {ok, d};
}

// 8. constant-strength Jacobs does not converge
Outcome constant_strength() {
    const auto st = run_ensemble(preset("remark3-const-k").front(), g_workers);
    const double m = st.delta.back().mean;
    return {m >= 0.3, fmt("folded mean at T=5 %.4g (>=0.3)", m)};
}

// 9. byte-identical CSVs across repeats and worker counts
Outcome determinism() {
    namespace fs = std::filesystem;
    const auto root = fs::temp_directory_path() / "adaptq_acceptance_det";
    bool ok = true;
    int files = 0;
    for (const auto &name : preset_names()) {
        auto runs = preset(name);
        Overrides o;
        o.paths = 256;
        o.horizon = 1.0;
        o.apply(runs);
        const unsigned w[3] = {1, 1, 8};
        for (int i = 0; i < 3; ++i) {
            fs::remove_all(root / std::to_string(i));
            run_all(runs, root / std::to_string(i), w[i], name);
        }
        for (const auto &e : fs::directory_iterator(root / "0")) {
            if (e.path().extension() != ".csv") continue;
            const auto f = e.path().filename();
            const std::string a = read_file(root / "0" / f);
            ok = ok && a == read_file(root / "1" / f) && a == read_file(root / "2" / f);
            ++files;
        }
    }
    fs::remove_all(root);
    return {ok, fmt("%d CSVs compared across two 1-worker runs and one 8-worker run of every preset", files)};
}

}  // namespace

int main(int argc, char **argv) {
    g_workers = std::max(1u, std::thread::hardware_concurrency());
    std::set<int> only;
    for (int i = 1; i < argc; ++i) {
        if (!std::strcmp(argv[i], "--workers") && i + 1 < argc) g_workers = static_cast<unsigned>(std::stoul(argv[++i]));
        else if (!std::strcmp(argv[i], "--only") && i + 1 < argc) {
            std::string s = argv[++i];
            for (std::size_t p = 0; p < s.size();) {
                const auto q = s.find(',', p);
                only.insert(std::stoi(s.substr(p, q - p)));
                p = q == std::string::npos ? s.size() : q + 1;
            }
        }
    }

    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"oracle equivalence", oracle_equivalence},
        {"closed form / lognormal tail", closed_form},
        {"convergence at Delta = 0", convergence},
        {"long-run error proportional to Delta", proportionality},
        {"alpha = 1/2 optimality", optimality},
        {"robustness to wrong Delta'", robustness},
        {"persistence at larger kappa", persistence},
        {"constant-strength Jacobs", constant_strength},
        {"determinism", determinism},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const int id = static_cast<int>(i) + 1;
        if (!only.empty() && !only.count(id)) continue;
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception &e) {
            o = {false, std::string("error: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("[%s] criterion %d, %s: %s (%.1fs)\n", o.pass ? "PASS" : "FAIL", id, criteria[i].first.c_str(),
                    o.detail.c_str(), secs);
        std::fflush(stdout);
        failed += !o.pass;
    }
    return failed == 0 ? 0 : 1;
}
