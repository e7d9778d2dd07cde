#include "lloqss/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <limits>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lloqss/broadcast.hpp"
#include "lloqss/compensation.hpp"
#include "lloqss/csv.hpp"
#include "lloqss/errors.hpp"
#include "lloqss/keyrate.hpp"
#include "lloqss/optimize.hpp"
#include "lloqss/protocol.hpp"
#include "lloqss/rng.hpp"

namespace lloqss {

namespace {

namespace fs = std::filesystem;

std::string num(double v) { return CsvTable::fmt(v); }

const std::vector<std::string> kBudgetCols = {
    "eps_am",   "eps_le",    "eps_adc",  "eps_error",
    "eps_slow", "eps_phase", "eps_rest", "eps_total"};

// Component columns appended to scan rows (eps_total already has its own
// column near the front).
const std::vector<std::string> kComponentCols = {
    "eps_am", "eps_le", "eps_adc", "eps_error", "eps_slow", "eps_phase",
    "eps_rest"};

std::vector<std::string> budget_cells(const NoiseBudget& b) {
    return {num(b.eps_am),   num(b.eps_le),    num(b.eps_adc),
            num(b.eps_error), num(b.eps_slow), num(b.eps_phase),
            num(b.eps_rest), num(b.eps_total)};
}

std::vector<std::string> component_cells(const NoiseBudget& b) {
    return {num(b.eps_am),   num(b.eps_le),   num(b.eps_adc),
            num(b.eps_error), num(b.eps_slow), num(b.eps_phase),
            num(b.eps_rest)};
}

void append(std::vector<std::string>& row, std::vector<std::string> tail) {
    for (auto& cell : tail) row.push_back(std::move(cell));
}

std::vector<std::string> cat(std::vector<std::string> head,
                             const std::vector<std::string>& tail) {
    for (const auto& cell : tail) head.push_back(cell);
    return head;
}

void write_table(const CsvTable& t, const fs::path& path) {
    t.write_atomic(path);
    std::cout << "wrote " << path.string() << " (" << t.rows()
              << (t.rows() == 1 ? " row)" : " rows)") << "\n";
}

double effective_span(const SystemConfig& sys) {
    return user_transmittances(sys).empty() ? 0.0
                                            : user_distances(sys)[0];
}

int cmd_keyrate(const ExperimentConfig& cfg) {
    const SystemRateReport rep =
        evaluate_system(cfg.system, cfg.scan.optimize_ref);
    const double span = effective_span(cfg.system);
    const double t1 = user_transmittances(cfg.system)[0];
    const double plob = t1 < 1.0 ? plob_bound(t1)
                                 : std::numeric_limits<double>::infinity();

    CsvTable budget(kBudgetCols);
    budget.add_row(budget_cells(rep.budget));
    write_table(budget, fs::path(cfg.run.out_dir) / "budget.csv");

    CsvTable kr({"span_km", "R_bits_per_pulse", "limiting_link",
                 "alpha_R1_sq", "eps_total", "plob_T1"});
    kr.add_row({num(span), num(rep.rate),
                CsvTable::fmt(static_cast<std::uint64_t>(rep.limiting_link + 1)),
                num(rep.ref_intensity), num(rep.budget.eps_total), num(plob)});
    write_table(kr, fs::path(cfg.run.out_dir) / "keyrate.csv");

    std::cout << "keyrate: " << cfg.system.n_users << " users ("
              << placement_name(cfg.system.placement) << "), span "
              << num(span) << " km\n";
    for (std::size_t j = 0; j < rep.links.size(); ++j)
        std::cout << "  link " << j + 1 << ": R = " << num(rep.links[j].rate)
                  << " bits/pulse\n";
    std::cout << "R = " << num(rep.rate) << " bits/pulse (limiting link "
              << rep.limiting_link + 1 << ")\n"
              << "eps_total = " << num(rep.budget.eps_total)
              << " SNU, alpha_R1_sq = " << num(rep.ref_intensity) << "\n"
              << "plob(T1) = " << num(plob) << " bits/pulse\n";
    if (!(rep.rate > 0.0))
        throw NoPositiveRateError("no positive key rate at span " + num(span) +
                                  " km");
    return 0;
}

int cmd_scan_distance(const ExperimentConfig& cfg) {
    const auto rows =
        scan_distance(cfg.system, cfg.scan.l_min, cfg.scan.l_max,
                      cfg.scan.points, cfg.scan.optimize_ref,
                      cfg.scan.parallel);
    CsvTable t(cat({"span_km", "R_bits_per_pulse", "eps_total",
                    "eps_tolerable", "alpha_R1_sq_opt"},
                   kComponentCols));
    double last_positive = std::numeric_limits<double>::quiet_NaN();
    for (const auto& r : rows) {
        std::vector<std::string> row = {num(r.span_km), num(r.rate),
                                        num(r.budget.eps_total),
                                        num(r.eps_tolerable),
                                        num(r.ref_intensity)};
        append(row, component_cells(r.budget));
        t.add_row(std::move(row));
        if (r.rate > 0.0) last_positive = r.span_km;
    }
    write_table(t, fs::path(cfg.run.out_dir) / "scan_distance.csv");
    if (std::isnan(last_positive))
        std::cout << "no positive rate on the grid\n";
    else
        std::cout << "last positive rate at " << num(last_positive) << " km\n";
    return 0;
}

int cmd_scan_variance(const ExperimentConfig& cfg) {
    const auto rows =
        scan_variance(cfg.system, cfg.scan.v1_max, cfg.scan.v2_max,
                      cfg.scan.grid, cfg.scan.optimize_ref, cfg.scan.parallel);
    CsvTable t(cat({"v_mod1", "v_mod2", "R_bits_per_pulse", "eps_total",
                    "alpha_R1_sq_opt"},
                   kComponentCols));
    std::size_t positive = 0;
    for (const auto& r : rows) {
        SystemConfig sys = cfg.system;
        sys.v_mod[0] = r.v1;
        sys.v_mod[1] = r.v2;
        const NoiseBudget b = noise_budget(sys, r.ref_intensity);
        std::vector<std::string> row = {num(r.v1), num(r.v2), num(r.rate),
                                        num(r.eps_total),
                                        num(r.ref_intensity)};
        append(row, component_cells(b));
        t.add_row(std::move(row));
        if (r.rate > 0.0) ++positive;
    }
    write_table(t, fs::path(cfg.run.out_dir) / "scan_variance.csv");
    std::cout << positive << " of " << rows.size()
              << " grid points have positive rate\n";
    return 0;
}

int cmd_scan_ratio(const ExperimentConfig& cfg) {
    const auto rows = scan_ratio(cfg.system, cfg.scan.points,
                                 cfg.scan.optimize_ref, cfg.scan.parallel);
    CsvTable t(cat({"ratio", "R_bits_per_pulse", "eps_total",
                    "alpha_R1_sq_opt"},
                   kComponentCols));
    for (const auto& r : rows) {
        std::vector<std::string> row = {num(r.ratio), num(r.rate),
                                        num(r.budget.eps_total),
                                        num(r.ref_intensity)};
        append(row, component_cells(r.budget));
        t.add_row(std::move(row));
    }
    write_table(t, fs::path(cfg.run.out_dir) / "scan_ratio.csv");
    return 0;
}

int cmd_scan_users(const ExperimentConfig& cfg) {
    const auto rows = scan_users(cfg.system, cfg.scan.users_min,
                                 cfg.scan.users_max, cfg.scan.parallel);
    CsvTable t({"n_users", "max_span_km", "eps_total_at_max",
                "alpha_R1_sq_opt"});
    int best_n = 0;
    double best_span = 0.0;
    for (const auto& r : rows) {
        t.add_row({CsvTable::fmt(r.n_users), num(r.max_span_km),
                   num(r.eps_total_at_max), num(r.ref_intensity_at_max)});
        if (r.max_span_km > 0.0 && r.n_users > best_n) {
            best_n = r.n_users;
            best_span = r.max_span_km;
        }
    }
    write_table(t, fs::path(cfg.run.out_dir) / "scan_users.csv");
    if (best_n > 0)
        std::cout << "largest supported user count on the grid: " << best_n
                  << " (max span " << num(best_span) << " km)\n";
    else
        std::cout << "no user count on the grid supports a positive rate\n";
    return 0;
}

int cmd_optimize_ref(const ExperimentConfig& cfg) {
    const double closed = optimal_reference_intensity(cfg.system);
    const double bisect = optimal_reference_intensity_bisect(cfg.system);
    const NoiseBudget b = noise_budget(cfg.system, closed);
    const SystemRateReport rep = system_key_rate(cfg.system, closed);

    CsvTable t(cat({"alpha_R1_sq_closed", "alpha_R1_sq_bisect",
                    "R_bits_per_pulse"},
                   kBudgetCols));
    t.add_row(cat({num(closed), num(bisect), num(rep.rate)},
                  budget_cells(b)));
    write_table(t, fs::path(cfg.run.out_dir) / "optimize_ref.csv");

    std::cout << "alpha_R1_sq_opt = " << num(closed) << " (bisect "
              << num(bisect) << ", relative gap "
              << num(std::fabs(closed - bisect) / closed) << ")\n"
              << "eps_error = " << num(b.eps_error)
              << ", eps_le = " << num(b.eps_le) << " (balanced at optimum)\n"
              << "R = " << num(rep.rate) << " bits/pulse at the optimum\n";
    return 0;
}

SimConfig make_sim(const ExperimentConfig& cfg) {
    if (cfg.system.n_users != 2)
        throw ConfigError(cfg.run.command + " requires system.users = 2");
    const auto d = user_distances(cfg.system);
    SimConfig s;
    s.v_mod1 = cfg.system.v_mod[0];
    s.v_mod2 = cfg.system.v_mod[1];
    s.geom.alpha_db_per_km = cfg.system.alpha_db_per_km;
    s.geom.l1_km = d[0] - d[1];
    s.geom.l2_km = d[1];
    s.det = cfg.system.det;
    s.eps_sim = cfg.sim.eps_sim;
    s.eps_ch = cfg.system.eps_ch;
    s.ref_intensity = cfg.system.ref_intensity;
    s.ref_noise = cfg.sim.ref_noise;
    s.sigma_walk = cfg.sim.sigma_walk;
    s.freeze_fast_drift = cfg.sim.freeze_fast_drift;
    s.zero_detection_noise = cfg.sim.zero_detection_noise;
    s.start.theta1_delay = 0.0;
    s.start.thetaD_delay = cfg.sim.dtheta_d1;
    s.start.theta2_delay = s.start.thetaD_delay - cfg.sim.dtheta_d2;
    return s;
}

// Dealer x after the stage-one rotation, for ad hoc correlation estimates.
double dealer_stage_one_x(const FrameRecord& f) {
    return first_rotation(f.dealer, f.thetaDR).x;
}

struct EstimateSeries {
    std::vector<double> x, p, d;
};

EstimateSeries user1_series(const std::vector<FrameRecord>& frames,
                            std::size_t lo, std::size_t hi) {
    EstimateSeries s;
    s.x.resize(hi - lo);
    s.p.resize(hi - lo);
    s.d.resize(hi - lo);
    for (std::size_t i = lo; i < hi; ++i) {
        s.x[i - lo] = frames[i].user1.x;
        s.p[i - lo] = frames[i].user1.p;
        s.d[i - lo] = dealer_stage_one_x(frames[i]);
    }
    return s;
}

int cmd_simulate(const ExperimentConfig& cfg) {
    const SimConfig sim = make_sim(cfg);
    const std::uint64_t n = cfg.run.frames;
    const std::uint64_t n_est = std::max<std::uint64_t>(
        1, static_cast<std::uint64_t>(static_cast<double>(n) *
                                      cfg.sim.disclosure_fraction));
    if (n_est >= n)
        throw ConfigError("run.frames too small for sim.disclosure_fraction");

    RandomStream rng(cfg.run.seed, 0);
    const std::vector<FrameRecord> frames =
        simulate_block(sim, 0, static_cast<std::size_t>(n), rng);
    const std::vector<FrameRecord> est(frames.begin(),
                                       frames.begin() +
                                           static_cast<std::ptrdiff_t>(n_est));
    const std::vector<FrameRecord> key(frames.begin() +
                                           static_cast<std::ptrdiff_t>(n_est),
                                       frames.end());
    const CompensatedBlock blk = compensate_block(est, key, n_est);

    const double true1 = cfg.sim.dtheta_d1, true2 = cfg.sim.dtheta_d2;
    const double err1 = wrap_angle(blk.estimate.dtheta_d1 - true1);
    const double err2 = wrap_angle(blk.estimate.dtheta_d2 - true2);

    const std::size_t nk = blk.user1.samples.size();
    std::vector<double> x1(nk), p1(nk), x2(nk), p2(nk), xd(nk);
    for (std::size_t i = 0; i < nk; ++i) {
        x1[i] = blk.user1.samples[i].x;
        p1[i] = blk.user1.samples[i].p;
        x2[i] = blk.user2.samples[i].x;
        p2[i] = blk.user2.samples[i].p;
        xd[i] = blk.dealer.samples[i].x;
    }
    double res1 = std::numeric_limits<double>::quiet_NaN();
    double res2 = res1;
    try {
        res1 = estimate_cumulative_phase(x1, p1, xd);
    } catch (const IndeterminateAngleError&) {
    }
    try {
        res2 = estimate_cumulative_phase(x2, p2, xd);
    } catch (const IndeterminateAngleError&) {
    }

    // Block-to-block spread of the user-1 estimate over four estimation
    // sub-blocks, as a measured stand-in for the slow-drift variance.
    double v_slow_hat = 0.0;
    if (est.size() >= 8) {
        std::vector<double> estimates;
        const std::size_t q = est.size() / 4;
        for (int b = 0; b < 4; ++b) {
            const std::size_t lo = static_cast<std::size_t>(b) * q;
            const std::size_t hi = (b == 3) ? est.size() : lo + q;
            const EstimateSeries s = user1_series(est, lo, hi);
            try {
                estimates.push_back(estimate_cumulative_phase(s.x, s.p, s.d));
            } catch (const IndeterminateAngleError&) {
            }
        }
        v_slow_hat = block_to_block_variance(estimates);
    }

    CsvTable t({"frames", "est_frames", "dtheta_d1_hat", "dtheta_d2_hat",
                "dtheta_d1_true", "dtheta_d2_true", "err_d1", "err_d2",
                "residual_d1", "residual_d2", "v_slow_hat"});
    t.add_row({CsvTable::fmt(n), CsvTable::fmt(n_est),
               num(blk.estimate.dtheta_d1), num(blk.estimate.dtheta_d2),
               num(true1), num(true2), num(err1), num(err2), num(res1),
               num(res2), num(v_slow_hat)});
    write_table(t, fs::path(cfg.run.out_dir) / "simulate_summary.csv");

    if (cfg.sim.dump_frames) {
        CsvTable dump({"frame", "x1", "p1", "x2", "p2", "xD", "pD",
                       "theta2R", "thetaDR", "phi1_true", "phi2_true"});
        for (std::size_t i = 0; i < frames.size(); ++i) {
            const FrameRecord& f = frames[i];
            dump.add_row({CsvTable::fmt(static_cast<std::uint64_t>(i)),
                          num(f.user1.x), num(f.user1.p), num(f.user2.x),
                          num(f.user2.p), num(f.dealer.x), num(f.dealer.p),
                          num(f.theta2R), num(f.thetaDR), num(f.phi1),
                          num(f.phi2)});
        }
        write_table(dump, fs::path(cfg.run.out_dir) / "frames.csv");
    }

    std::cout << "simulate: " << n << " frames (" << n_est
              << " disclosed), span " << num(sim.geom.span_km()) << " km\n"
              << "dtheta_d1_hat = " << num(blk.estimate.dtheta_d1)
              << " (true " << num(true1) << ", err " << num(err1) << ")\n"
              << "dtheta_d2_hat = " << num(blk.estimate.dtheta_d2)
              << " (true " << num(true2) << ", err " << num(err2) << ")\n"
              << "residual angles after compensation: " << num(res1) << ", "
              << num(res2) << "\n"
              << "v_slow_hat = " << num(v_slow_hat) << " rad^2\n";
    return 0;
}

std::vector<std::uint8_t> draw_bytes(RandomStream& rs, std::size_t n) {
    std::vector<std::uint8_t> out;
    out.reserve(n);
    while (out.size() < n) {
        std::uint64_t u = rs.next_u64();
        for (int i = 0; i < 8 && out.size() < n; ++i) {
            out.push_back(static_cast<std::uint8_t>(u & 0xff));
            u >>= 8;
        }
    }
    return out;
}

Series slice(const Series& s, std::size_t lo, std::size_t hi) {
    Series out;
    out.first_frame = s.first_frame + lo;
    out.samples.assign(s.samples.begin() + static_cast<std::ptrdiff_t>(lo),
                       s.samples.begin() + static_cast<std::ptrdiff_t>(hi));
    return out;
}

int cmd_protocol(const ExperimentConfig& cfg) {
    const SimConfig sim = make_sim(cfg);
    const std::uint64_t n = cfg.run.frames;
    const std::uint64_t n_est = std::max<std::uint64_t>(
        1, static_cast<std::uint64_t>(static_cast<double>(n) *
                                      cfg.sim.disclosure_fraction));
    const std::uint64_t n_test = n_est;
    if (n_est + n_test >= n)
        throw ConfigError("run.frames too small for the protocol splits");

    RandomStream rng(cfg.run.seed, 0);
    const std::vector<FrameRecord> frames =
        simulate_block(sim, 0, static_cast<std::size_t>(n), rng);
    const std::vector<FrameRecord> est(frames.begin(),
                                       frames.begin() +
                                           static_cast<std::ptrdiff_t>(n_est));
    const std::vector<FrameRecord> rest(frames.begin() +
                                            static_cast<std::ptrdiff_t>(n_est),
                                        frames.end());
    const CompensatedBlock blk = compensate_block(est, rest, n_est);

    // Disclosed test slice for transmittance estimation; the remainder is
    // the key material.
    const std::size_t ntest = static_cast<std::size_t>(n_test);
    const Series u1t = slice(blk.user1, 0, ntest);
    const Series u2t = slice(blk.user2, 0, ntest);
    const Series dt = slice(blk.dealer, 0, ntest);
    const std::vector<double> t_hat =
        estimate_transmittances({u1t, u2t}, dt, cfg.system.det.eta);

    double t1_hat = t_hat[0], t2_hat = t_hat[1];
    if (t1_hat > 1.0 || t2_hat > 1.0) {
        std::cout << "note: transmittance estimate clamped to 1\n";
        t1_hat = std::min(t1_hat, 1.0);
        t2_hat = std::min(t2_hat, 1.0);
    }
    if (t1_hat <= 1e-12 || t2_hat <= 1e-12)
        throw NoPositiveRateError("estimated transmittance is zero");

    const std::size_t nk = blk.user1.samples.size() - ntest;

    // Step-7 subtraction: remove user 2's announced contribution from the
    // dealer record and check what correlation is left.
    double corr = 0.0, den2 = 0.0, dend = 0.0;
    for (std::size_t i = ntest; i < blk.user1.samples.size(); ++i) {
        const QuadPair d1 =
            dealer_subtract(blk.dealer.samples[i], blk.user2.samples[i],
                            t2_hat, cfg.system.det.eta, cfg.sim.subtract_mode);
        const double x2 = blk.user2.samples[i].x;
        corr += x2 * d1.x;
        den2 += x2 * x2;
        dend += d1.x * d1.x;
    }
    const double subtract_residual =
        (den2 > 0.0 && dend > 0.0) ? corr / std::sqrt(den2 * dend) : 0.0;

    const NoiseBudget budget = noise_budget(cfg.system);
    KeyRateInputs in1;
    in1.v_mod = cfg.system.v_mod[0];
    in1.T = t1_hat;
    in1.eps = budget.eps_total;
    in1.eta = cfg.system.det.eta;
    in1.v_el = cfg.system.det.v_el;
    in1.beta = cfg.system.beta;
    KeyRateInputs in2 = in1;
    in2.v_mod = cfg.system.v_mod[1];
    in2.T = t2_hat;
    const double r1 = link_key_rate(in1).rate;
    const double r2 = link_key_rate(in2).rate;
    const double rate = std::min(r1, r2);
    const int limiting = r1 <= r2 ? 1 : 2;

    std::size_t n_bytes = 0;
    bool broadcast_ok = false;
    if (rate > 0.0) {
        const double bytes =
            std::floor(rate * static_cast<double>(nk) / 8.0);
        n_bytes = static_cast<std::size_t>(
            std::clamp(bytes, 1.0, 4096.0));
        RandomStream bs(cfg.run.seed, 1);
        const auto k1 = draw_bytes(bs, n_bytes);
        const auto k2 = draw_bytes(bs, n_bytes);
        const auto msg = draw_bytes(bs, n_bytes);
        const std::vector<std::vector<std::uint8_t>> keys = {k1, k2};
        const auto encoded = encode_broadcast(msg, keys);
        broadcast_ok = decode_broadcast(encoded, keys) == msg;
    }

    CsvTable t({"frames", "est_frames", "test_frames", "key_frames",
                "dtheta_d1_hat", "dtheta_d2_hat", "t1_hat", "t2_hat",
                "t1_true", "t2_true", "subtract_residual",
                "R1_bits_per_pulse", "R2_bits_per_pulse", "R_bits_per_pulse",
                "limiting_link", "eps_total", "broadcast_bytes",
                "broadcast_ok"});
    t.add_row({CsvTable::fmt(n), CsvTable::fmt(n_est), CsvTable::fmt(n_test),
               CsvTable::fmt(static_cast<std::uint64_t>(nk)),
               num(blk.estimate.dtheta_d1), num(blk.estimate.dtheta_d2),
               num(t1_hat), num(t2_hat), num(sim.geom.t1()),
               num(sim.geom.t2()), num(subtract_residual), num(r1), num(r2),
               num(rate), CsvTable::fmt(limiting),
               num(budget.eps_total),
               CsvTable::fmt(static_cast<std::uint64_t>(n_bytes)),
               broadcast_ok ? "1" : "0"});
    write_table(t, fs::path(cfg.run.out_dir) / "protocol_summary.csv");

    std::cout << "protocol: " << n << " frames (" << n_est << " phase + "
              << n_test << " transmittance disclosed, " << nk << " key)\n"
              << "dtheta hats: " << num(blk.estimate.dtheta_d1) << ", "
              << num(blk.estimate.dtheta_d2) << "\n"
              << "T1_hat = " << num(t1_hat) << " (true "
              << num(sim.geom.t1()) << "), T2_hat = " << num(t2_hat)
              << " (true " << num(sim.geom.t2()) << ")\n"
              << "subtract residual correlation = " << num(subtract_residual)
              << "\n"
              << "R = " << num(rate) << " bits/pulse (links " << num(r1)
              << ", " << num(r2) << "; limiting " << limiting << ")\n";
    if (rate > 0.0)
        std::cout << "broadcast demo: " << n_bytes << " bytes, "
                  << (broadcast_ok ? "decoded correctly" : "DECODE FAILED")
                  << "\n";
    if (!(rate > 0.0))
        throw NoPositiveRateError("no positive key rate at span " +
                                  num(sim.geom.span_km()) + " km");
    return 0;
}

}  // namespace

int run_command(const ExperimentConfig& cfg) {
    fs::create_directories(cfg.run.out_dir);
    const std::string& c = cfg.run.command;
    if (c == "keyrate") return cmd_keyrate(cfg);
    if (c == "scan-distance") return cmd_scan_distance(cfg);
    if (c == "scan-variance") return cmd_scan_variance(cfg);
    if (c == "scan-ratio") return cmd_scan_ratio(cfg);
    if (c == "scan-users") return cmd_scan_users(cfg);
    if (c == "optimize-ref") return cmd_optimize_ref(cfg);
    if (c == "simulate") return cmd_simulate(cfg);
    if (c == "protocol") return cmd_protocol(cfg);
    throw ConfigError(
        "unknown command '" + c +
        "' (expected keyrate|scan-distance|scan-variance|scan-ratio|"
        "scan-users|optimize-ref|simulate|protocol)");
}

int cli_main(int argc, char** argv) {
    CLI::App app{"key-rate analysis and Monte Carlo simulation for a "
                 "continuous-variable secret-sharing system"};
    std::string config_path, command_flag, command_pos, out_dir;
    std::uint64_t seed = 0, frames = 0;
    app.add_option("--config", config_path,
                   "config file (flat key=value or JSON)");
    app.add_option("--seed", seed, "RNG seed (overrides config)");
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--frames", frames, "Monte Carlo frame count");
    app.add_option("--command", command_flag, "command to run");
    app.add_option("cmd", command_pos,
                   "keyrate|scan-distance|scan-variance|scan-ratio|"
                   "scan-users|optimize-ref|simulate|protocol");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        ExperimentConfig cfg;
        if (!config_path.empty()) load_config_file(cfg, config_path);
        apply_env_overrides(cfg);
        if (app.count("--seed")) cfg.run.seed = seed;
        if (app.count("--out")) cfg.run.out_dir = out_dir;
        if (app.count("--frames")) cfg.run.frames = frames;
        if (app.count("cmd")) cfg.run.command = command_pos;
        if (app.count("--command")) cfg.run.command = command_flag;
        if (cfg.run.command.empty())
            throw ConfigError("no command given (pass one as a positional "
                              "argument or via --command)");
        finalize(cfg);
        return run_command(cfg);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const NoPositiveRateError& e) {
        std::cerr << "no positive rate: " << e.what() << "\n";
        return 3;
    } catch (const NumericalDomainError& e) {
        std::cerr << "numerical domain error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace lloqss
