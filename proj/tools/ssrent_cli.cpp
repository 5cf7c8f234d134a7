// ssrent command-line tool: single queries and reproducible sweeps (CSV / JSON).
#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "ssrent/convertibility.hpp"
#include "ssrent/distillation.hpp"
#include "ssrent/formation.hpp"
#include "ssrent/io.hpp"
#include "ssrent/monotones.hpp"
#include "ssrent/qubit_state.hpp"
#include "ssrent/random.hpp"
#include "ssrent/reference_frames.hpp"

using namespace ssrent;

namespace {

constexpr int kExitOk = 0, kExitParse = 2, kExitScale = 3, kExitInvariant = 4;

struct InvariantBreach : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// one cell: numbers keep full precision, text stays text
struct Cell {
  std::variant<double, long long, std::string, bool> v;
  Cell(double d) : v(d) {}
  Cell(int i) : v(static_cast<long long>(i)) {}
  Cell(long long i) : v(i) {}
  Cell(bool b) : v(b) {}
  Cell(std::string s) : v(std::move(s)) {}
  Cell(const char* s) : v(std::string(s)) {}

  std::string csv() const {
    if (auto* d = std::get_if<double>(&v)) {
      if (std::isnan(*d)) return "nan";
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.17g", *d);
      return buf;
    }
    if (auto* i = std::get_if<long long>(&v)) return std::to_string(*i);
    if (auto* b = std::get_if<bool>(&v)) return *b ? "true" : "false";
    return std::get<std::string>(v);
  }
  nlohmann::json json() const {
    if (auto* d = std::get_if<double>(&v)) return std::isnan(*d) ? nlohmann::json(nullptr) : nlohmann::json(*d);
    if (auto* i = std::get_if<long long>(&v)) return *i;
    if (auto* b = std::get_if<bool>(&v)) return *b;
    return std::get<std::string>(v);
  }
};
using Row = std::vector<Cell>;

struct Table {
  std::vector<std::string> header;
  std::vector<Row> rows;
};

int worker_count(std::size_t jobs) {
  unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("SSRENT_THREADS")) {
    int cap = std::atoi(env);
    if (cap >= 1) hw = std::min<unsigned>(hw, static_cast<unsigned>(cap));
  }
  return static_cast<int>(std::min<std::size_t>(hw, std::max<std::size_t>(jobs, 1)));
}

// rows are written in index order whatever the completion order
std::vector<Row> run_rows(std::size_t count, const std::function<std::vector<Row>(std::size_t)>& job) {
  std::vector<std::vector<Row>> out(count);
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i; (i = next++) < count;) {
      try {
        out[i] = job(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  int n = worker_count(count);
  for (int t = 1; t < n; ++t) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  std::vector<Row> flat;
  for (auto& rows : out)
    for (auto& r : rows) flat.push_back(std::move(r));
  return flat;
}

std::vector<double> grid(double lo, double hi, double step) {
  if (!(step > 0.0) || hi < lo) throw Error(ErrorCode::invalid_argument, "grid needs step > 0 and max >= min");
  auto n = static_cast<long>(std::floor((hi - lo) / step + 1e-9));
  if (n > 10'000'000) throw Error(ErrorCode::scale_exceeded, "grid too large");
  std::vector<double> g;
  for (long i = 0; i <= n; ++i) g.push_back(lo + static_cast<double>(i) * step);
  return g;
}

std::vector<int> int_grid(int lo, int hi, int step) {
  if (step < 1 || hi < lo) throw Error(ErrorCode::invalid_argument, "grid needs step >= 1 and max >= min");
  std::vector<int> g;
  for (int x = lo; x <= hi; x += step) g.push_back(x);
  return g;
}

// independent stream per row so output does not depend on the worker count
Rng row_rng(std::uint64_t seed, std::size_t row) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(row), static_cast<std::uint32_t>(row >> 32)};
  return Rng(seq);
}

void emit(const Table& t, const std::string& format, const std::string& out) {
  std::ostringstream ss;
  if (format == "json") {
    nlohmann::ordered_json oarr = nlohmann::ordered_json::array();
    for (const auto& r : t.rows) {
      nlohmann::ordered_json o;
      for (std::size_t c = 0; c < t.header.size(); ++c) o[t.header[c]] = r[c].json();
      oarr.push_back(std::move(o));
    }
    ss << oarr.dump(2) << "\n";
  } else {
    for (std::size_t c = 0; c < t.header.size(); ++c) ss << (c ? "," : "") << t.header[c];
    ss << "\n";
    for (const auto& r : t.rows) {
      for (std::size_t c = 0; c < r.size(); ++c) ss << (c ? "," : "") << r[c].csv();
      ss << "\n";
    }
  }
  if (out.empty()) std::cout << ss.str();
  else write_text_file(out, ss.str());
}

SectoredPureState qubit_pure(double p) {
  std::vector<Amplitude> a = {{{0, 0}, {1, 0}, std::sqrt(1.0 - p)}, {{1, 0}, {0, 0}, std::sqrt(p)}};
  return SectoredPureState::from_amplitudes(a, qubit_space(), qubit_space());
}

bool is_qubit_density(const BlockDensityMatrix& rho) {
  return rho.alice_space() == qubit_space() && rho.bob_space() == qubit_space();
}

struct Options {
  std::string format = "csv";
  std::string out;
  std::uint64_t seed = 0;
  bool seed_given = false;
  bool check = false;
};

void require_seed(const Options& o, const char* cmd) {
  if (!o.seed_given) throw Error(ErrorCode::invalid_argument, std::string(cmd) + " is randomized and needs --seed");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ssrent: entanglement under a particle-number superselection rule"};
  app.require_subcommand(1);
  Options opt;

  // monotones
  std::string state_file;
  auto* mono = app.add_subcommand("monotones", "EoE / SiV of a pure state, formation quantities of a qubit mixed state");
  mono->add_option("state", state_file, "JSON state file")->required();

  // convert
  std::string source_file, targets_file;
  auto* conv = app.add_subcommand("convert", "decide SSR convertibility of a pure-state task");
  conv->add_option("source", source_file, "source state file")->required();
  conv->add_option("targets", targets_file, "target state or target ensemble file")->required();

  // state
  std::string state_name;
  int fourier_n = 2, fourier_k = 0;
  double alpha = 1.0;
  auto* st = app.add_subcommand("state", "write a named state as canonical JSON");
  st->add_option("name", state_name, "vepr | eepr | rho-sep | fourier | coherent")
      ->required()
      ->check(CLI::IsMember({"vepr", "eepr", "rho-sep", "fourier", "coherent"}));
  st->add_option("--n", fourier_n, "fourier: number of states N");
  st->add_option("--k", fourier_k, "fourier: index k");
  st->add_option("--alpha", alpha, "coherent: amplitude");
  st->add_option("--out", opt.out, "output file (default stdout)");

  // sweep
  auto* sw = app.add_subcommand("sweep", "parameter sweeps");
  sw->require_subcommand(1);
  auto common = [&](CLI::App* c) {
    c->add_option("--format", opt.format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
    c->add_option("--out", opt.out, "output file (default stdout)");
    c->add_option_function<std::uint64_t>(
        "--seed", [&](const std::uint64_t& s) { opt.seed = s; opt.seed_given = true; }, "seed for randomized rows");
    c->add_flag("--check", opt.check, "exit 4 when a self-check exceeds its tolerance");
  };

  double p_min = 0.0, p_max = 1.0, p_step = 0.01;
  auto* ev_pure = sw->add_subcommand("ev-pure", "(EoE, SiV) of sqrt(1-p)|0,1> + sqrt(p)|1,0>");
  common(ev_pure);
  ev_pure->add_option("--p-min", p_min);
  ev_pure->add_option("--p-max", p_max);
  ev_pure->add_option("--step", p_step);

  int samples = 1000;
  auto* ev_qutrit = sw->add_subcommand("ev-qutrit", "(EoE, SiV) of random pure qutrit states");
  common(ev_qutrit);
  ev_qutrit->add_option("--samples", samples);
  auto* ev_mixed = sw->add_subcommand("ev-mixed", "(E_F, V_F) of random qubit mixed states");
  common(ev_mixed);
  ev_mixed->add_option("--samples", samples);

  std::string variant = "entangled";
  int grid_n = 21, max_steps = 1000;
  double v_max = 1.0, w_max = 2.0;
  auto* flow = sw->add_subcommand("distill-flow", "one step and the limit of a recurrence map on a (v, w) grid");
  common(flow);
  flow->add_option("--variant", variant, "two-copy-a | two-copy-b | separable | entangled");
  flow->add_option("--grid", grid_n, "points per axis");
  flow->add_option("--v-max", v_max);
  flow->add_option("--w-max", w_max);
  flow->add_option("--max-steps", max_steps);

  int n_min = 2, n_max = 6, m_min = 4, m_max = 64, m_step = 1;
  std::vector<double> v_list = {1e4, 1e5, 1e6};
  auto* table = sw->add_subcommand("table1", "error probabilities: closed forms vs exact kernel sums");
  common(table);
  table->add_option("--n-min", n_min);
  table->add_option("--n-max", n_max);
  table->add_option("--m-min", m_min);
  table->add_option("--m-max", m_max);
  table->add_option("--m-step", m_step);
  table->add_option("--v", v_list, "gaussian helper SiV values")->delimiter(',');

  double p0 = 0.5;
  int c_min = 10, c_max = 200, c_step = 10;
  auto* gconv = sw->add_subcommand("gaussian-convergence", "total-number distribution of copies vs a Gaussian");
  common(gconv);
  gconv->add_option("--p0", p0, "weight of |0,1>");
  gconv->add_option("--copies-min", c_min);
  gconv->add_option("--copies-max", c_max);
  gconv->add_option("--copies-step", c_step);

  double a_min = 2.0, a_max = 8.0, a_step = 2.0;
  auto* tele = sw->add_subcommand("teleport-alpha", "teleportation with a coherent-state frame");
  common(tele);
  tele->add_option("--alpha-min", a_min);
  tele->add_option("--alpha-max", a_max);
  tele->add_option("--alpha-step", a_step);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitParse;
  }

  try {
    if (*mono) {
      ParsedState s = parse_state(read_text_file(state_file));
      if (auto* p = std::get_if<SectoredPureState>(&s)) {
        MonotonePair m = monotones(*p);
        std::printf("eoe=%.15g\nsiv=%.15g\n", m.eoe, m.siv);
      } else {
        const auto& rho = std::get<BlockDensityMatrix>(s);
        if (!is_qubit_density(rho))
          throw Error(ErrorCode::not_a_qubit_state, "mixed-state quantities are available for qubit states only");
        FormationPoint f = formation_point(QubitSSRState::from_density(rho));
        std::printf("p=%.15g\ncbar=%.15g\nef_ssr=%.15g\nvf_ssr=%.15g\nef=%.15g\nseparable_candidate=%s\n", f.p, f.cbar,
                    f.ef_ssr, f.vf_ssr, f.ef, f.separable_candidate ? "true" : "false");
      }
      return kExitOk;
    }
    if (*conv) {
      ConversionTask task = parse_task(read_text_file(source_file), read_text_file(targets_file));
      ConversionVerdict v = ssr_convertible(task);
      std::printf("convertible=%s\n", v.convertible ? "true" : "false");
      if (!v.convertible) {
        if (v.failing_sector) std::printf("failing_sector=%d\n", *v.failing_sector);
        std::printf("gap=%.15g\nreason=%s\n", v.gap, v.reason.c_str());
      }
      return kExitOk;
    }
    if (*st) {
      std::string text;
      if (state_name == "vepr" || state_name == "eepr") {
        bool v = state_name == "vepr";
        LocalSpace s = v ? qubit_space() : LocalSpace::modes(2);
        LocalLabel x = v ? LocalLabel{0, 0} : mode_label(0b01, 2), y = v ? LocalLabel{1, 0} : mode_label(0b10, 2);
        std::vector<Amplitude> a = {{x, y, M_SQRT1_2}, {y, x, M_SQRT1_2}};
        text = to_json(SectoredPureState::from_amplitudes(a, s, s));
      } else if (state_name == "rho-sep") {
        text = to_json(rho_sep().density());
      } else if (state_name == "fourier") {
        text = to_json(fourier_hiding_state(fourier_n, fourier_k));
      } else {
        text = to_json(coherent_reference(alpha, coherent_cutoff(alpha)));
      }
      text += "\n";
      if (opt.out.empty()) std::cout << text;
      else write_text_file(opt.out, text);
      return kExitOk;
    }

    Table t;
    bool breach = false;
    std::string breach_note;
    if (*ev_pure) {
      std::vector<double> g = grid(p_min, p_max, p_step);
      t.header = {"p", "eoe", "siv"};
      t.rows = run_rows(g.size(), [&](std::size_t i) {
        double p = std::min(1.0, std::max(0.0, g[i]));
        MonotonePair m = monotones(qubit_pure(p));
        return std::vector<Row>{{p, m.eoe, m.siv}};
      });
    } else if (*ev_qutrit || *ev_mixed) {
      require_seed(opt, *ev_qutrit ? "ev-qutrit" : "ev-mixed");
      EVFamily fam = *ev_qutrit ? EVFamily::pure_qutrit : EVFamily::mixed_qubit;
      t.header = {"sample", "eoe", "siv", "p", "cbar", "separable_candidate"};
      t.rows = run_rows(static_cast<std::size_t>(std::max(samples, 0)), [&](std::size_t i) {
        Rng rng = row_rng(opt.seed, i);
        EVPoint e = ev_region_sample(fam, 1, rng).front();
        return std::vector<Row>{{static_cast<long long>(i), e.eoe, e.siv, e.p, e.cbar, e.separable_candidate}};
      });
    } else if (*flow) {
      RecurrenceVariant var = recurrence_variant_from_string(variant);
      if (grid_n < 2) throw Error(ErrorCode::invalid_argument, "--grid must be >= 2");
      t.header = {"v0", "w0", "v1", "w1", "v_final", "w_final", "steps", "converged"};
      t.rows = run_rows(static_cast<std::size_t>(grid_n) * grid_n, [&](std::size_t idx) {
        double v = v_max * static_cast<double>(idx / grid_n) / (grid_n - 1);
        double w = w_max * static_cast<double>(idx % grid_n) / (grid_n - 1);
        StandardForm one = apply_closed_form({v, w}, var);
        IterationResult it = iterate_recurrence({v, w}, var, 1e-9, max_steps);
        return std::vector<Row>{{v, w, one.v, one.w, it.final_form.v, it.final_form.w, it.steps, it.converged}};
      });
    } else if (*table) {
      t.header = {"task", "helper_kind", "N", "M_or_V", "p_err_closed_form", "p_err_exact"};
      struct Job {
        Task task;
        HelperKind kind;
        int n;
        double size;
      };
      std::vector<Job> jobs;
      for (Task task : {Task::distinguish, Task::teleport})
        for (int n : int_grid(n_min, n_max, 1)) {
          for (int m : int_grid(m_min, m_max, m_step)) jobs.push_back({task, HelperKind::constant, n, double(m)});
          for (double v : v_list) jobs.push_back({task, HelperKind::gaussian, n, v});
        }
      std::atomic<bool> bad{false};
      t.rows = run_rows(jobs.size(), [&](std::size_t i) {
        const Job& j = jobs[i];
        double closed = table_closed_form(j.task, j.kind, j.n, j.size);
        double exact = error_probability(j.task, {j.kind, j.size}, j.n);
        bool ok = j.kind == HelperKind::constant ? std::abs(closed - exact) <= 1e-12
                                                 : std::abs(closed - exact) <= 0.01 * std::abs(closed);
        if (!ok) bad = true;
        return std::vector<Row>{{to_string(j.task), to_string(j.kind), j.n, j.size, closed, exact}};
      });
      breach = bad;
      breach_note = "closed form and exact kernel sum disagree beyond tolerance";
    } else if (*gconv) {
      SectoredPureState phi = qubit_pure(1.0 - p0);
      t.header = {"copies", "gap_detected", "gap_period", "kl_divergence", "variance_ratio"};
      std::vector<int> cs = int_grid(c_min, c_max, c_step);
      std::atomic<bool> bad{false};
      t.rows = run_rows(cs.size(), [&](std::size_t i) {
        GaussianConvergence g = gaussian_convergence(phi, cs[i]);
        if (!g.gap_detected && std::abs(g.variance_ratio - 1.0) > 0.01) bad = true;
        return std::vector<Row>{{cs[i], g.gap_detected, g.gap_period, g.kl_divergence, g.variance_ratio}};
      });
      breach = bad;
      breach_note = "variance ratio off by more than 1%";
    } else if (*tele) {
      std::vector<double> as = grid(a_min, a_max, a_step);
      t.header = {"alpha", "cutoff", "fidelity", "condition_residual", "vf_oracle", "vf_printed"};
      SectoredPureState phi = fourier_hiding_state(2, 0);
      t.rows = run_rows(as.size(), [&](std::size_t i) {
        int cutoff = coherent_cutoff(as[i]);
        TeleportResult r = mixed_teleport(phi, coherent_reference(as[i], cutoff));
        return std::vector<Row>{{as[i], cutoff, r.fidelity, r.condition_residual, coherent_vf_oracle(as[i], cutoff),
                                 as[i] * as[i] / 2.0}};
      });
    }
    emit(t, opt.format, opt.out);
    if (opt.check && breach) throw InvariantBreach(breach_note);
    return kExitOk;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code() == ErrorCode::scale_exceeded ? kExitScale : kExitParse;
  } catch (const InvariantBreach& e) {
    std::cerr << "invariant breach: " << e.what() << "\n";
    return kExitInvariant;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInvariant;
  }
}
