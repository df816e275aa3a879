// Copyright 2026 The cmtlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cmtlab/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <ostream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "cmtlab/krylov.hpp"
#include "cmtlab/perturbation.hpp"
#include "cmtlab/phase_space.hpp"
#include "cmtlab/quantifiers.hpp"

#ifndef CMTLAB_VERSION
#define CMTLAB_VERSION "0.0.0"
#endif

namespace cmt {

namespace {

using nlohmann::json;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

[[noreturn]] void invalid(const std::string& field, const std::string& why) {
  throw Error(ErrorCode::kInvalidConfig, "field '" + field + "': " + why);
}

std::string join_path(const std::string& parent, const std::string& key) {
  return parent.empty() ? key : parent + "." + key;
}

void check_keys(const json& obj, const std::string& path, const std::vector<std::string>& allowed) {
  if (!obj.is_object()) invalid(path.empty() ? "<root>" : path, "must be an object");
  for (const auto& item : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), item.key()) == allowed.end()) {
      std::string list;
      for (const auto& a : allowed) list += (list.empty() ? "" : ", ") + a;
      invalid(join_path(path, item.key()), "unknown key (allowed: " + list + ")");
    }
  }
}

double get_number(const json& obj, const std::string& key, const std::string& path, double fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number()) invalid(join_path(path, key), "must be a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) invalid(join_path(path, key), "must be finite");
  return x;
}

long long get_integer(const json& obj, const std::string& key, const std::string& path, long long fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (v.is_number_integer() || v.is_number_unsigned()) return v.get<long long>();
  if (v.is_number_float()) {
    const double x = v.get<double>();
    if (std::floor(x) == x && std::abs(x) < 9e15) return static_cast<long long>(x);
  }
  invalid(join_path(path, key), "must be an integer");
}

std::string get_string(const json& obj, const std::string& key, const std::string& path, const std::string& fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_string()) invalid(join_path(path, key), "must be a string");
  return v.get<std::string>();
}

bool get_bool(const json& obj, const std::string& key, const std::string& path, bool fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_boolean()) invalid(join_path(path, key), "must be true or false");
  return v.get<bool>();
}

Axis parse_axis(char c, const std::string& field) {
  switch (c) {
    case 'x': return Axis::kX;
    case 'y': return Axis::kY;
    case 'z': return Axis::kZ;
    default: invalid(field, std::string("axis must be x, y or z, got '") + c + "'");
  }
}

ModelSpec parse_model(const json& m) {
  const std::string path = "model";
  if (!m.is_object()) invalid(path, "must be an object");
  const std::string type = get_string(m, "type", path, "");
  if (type == "kicked-top") {
    check_keys(m, path, {"type", "j", "lambda", "alpha"});
    KickedTop k;
    k.j = get_number(m, "j", path, k.j);
    k.lambda = get_number(m, "lambda", path, k.lambda);
    k.alpha = get_number(m, "alpha", path, k.alpha);
    return k;
  }
  if (type == "kicked-ising") {
    check_keys(m, path, {"type", "L", "J", "hx", "hz"});
    KickedIsing k;
    k.L = static_cast<int>(get_integer(m, "L", path, k.L));
    k.J = get_number(m, "J", path, k.J);
    k.hx = get_number(m, "hx", path, k.hx);
    k.hz = get_number(m, "hz", path, k.hz);
    return k;
  }
  if (type == "tilted-ising") {
    check_keys(m, path, {"type", "L", "J", "hx", "hz", "dt"});
    TiltedIsing k;
    k.L = static_cast<int>(get_integer(m, "L", path, k.L));
    k.J = get_number(m, "J", path, k.J);
    k.hx = get_number(m, "hx", path, k.hx);
    k.hz = get_number(m, "hz", path, k.hz);
    k.dt = get_number(m, "dt", path, k.dt);
    return k;
  }
  if (type == "xxz") {
    check_keys(m, path, {"type", "L", "Jxy", "Jzz", "g", "site", "dt", "impurity_axis"});
    XXZ k;
    k.L = static_cast<int>(get_integer(m, "L", path, k.L));
    k.Jxy = get_number(m, "Jxy", path, k.Jxy);
    k.Jzz = get_number(m, "Jzz", path, k.Jzz);
    k.g = get_number(m, "g", path, k.g);
    k.site = static_cast<int>(get_integer(m, "site", path, k.site));
    k.dt = get_number(m, "dt", path, k.dt);
    const std::string axis = get_string(m, "impurity_axis", path, "z");
    if (axis.size() != 1) invalid("model.impurity_axis", "must be one of x, y, z");
    k.impurity_axis = parse_axis(axis[0], "model.impurity_axis");
    return k;
  }
  invalid("model.type", "must be one of kicked-top, kicked-ising, tilted-ising, xxz (got '" + type + "')");
}

ExperimentKind parse_kind(const std::string& s) {
  if (s == "phase-space") return ExperimentKind::kPhaseSpace;
  if (s == "tomo") return ExperimentKind::kTomo;
  if (s == "krylov") return ExperimentKind::kKrylov;
  if (s == "perturb") return ExperimentKind::kPerturb;
  if (s == "rmt-compare") return ExperimentKind::kRmtCompare;
  if (s == "ordered-bloch") return ExperimentKind::kOrderedBloch;
  invalid("experiment",
          "must be one of phase-space, tomo, krylov, perturb, rmt-compare, ordered-bloch (got '" + s + "')");
}

EnsembleKind parse_ensemble(const std::string& s) {
  if (s == "GOE") return EnsembleKind::kGOE;
  if (s == "GUE") return EnsembleKind::kGUE;
  if (s == "CUE") return EnsembleKind::kCUE;
  if (s == "COE") return EnsembleKind::kCOE;
  invalid("rmt.ensemble", "must be one of GOE, GUE, CUE, COE (got '" + s + "')");
}

int default_n_states(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::kTomo: return 50;
    case ExperimentKind::kPerturb: return 100;
    case ExperimentKind::kRmtCompare: return 80;
    case ExperimentKind::kOrderedBloch: return 50;
    case ExperimentKind::kPhaseSpace: return 20;
    case ExperimentKind::kKrylov: return 1;
  }
  return 1;
}

void apply_override(json& root, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) invalid(assignment, "override must look like key.path=value");
  const std::string path = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);
  json value;
  try {
    value = json::parse(text);
  } catch (const json::exception&) {
    value = text;
  }
  json* node = &root;
  std::size_t start = 0;
  while (true) {
    const auto dot = path.find('.', start);
    const std::string key = path.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (key.empty()) invalid(path, "empty path component");
    if (!node->is_object()) invalid(path, "cannot descend into a non-object");
    if (dot == std::string::npos) {
      (*node)[key] = value;
      return;
    }
    node = &(*node)[key];
    if (node->is_null()) *node = json::object();
    start = dot + 1;
  }
}

double model_param(const ModelSpec& model, const std::string& param) {
  return std::visit(overloaded{
                        [&](const KickedTop& m) -> double {
                          if (param == "j") return m.j;
                          if (param == "lambda") return m.lambda;
                          if (param == "alpha") return m.alpha;
                          return std::nan("");
                        },
                        [&](const KickedIsing& m) -> double {
                          if (param == "L") return m.L;
                          if (param == "J") return m.J;
                          if (param == "hx") return m.hx;
                          if (param == "hz") return m.hz;
                          return std::nan("");
                        },
                        [&](const TiltedIsing& m) -> double {
                          if (param == "L") return m.L;
                          if (param == "J") return m.J;
                          if (param == "hx") return m.hx;
                          if (param == "hz") return m.hz;
                          if (param == "dt") return m.dt;
                          return std::nan("");
                        },
                        [&](const XXZ& m) -> double {
                          if (param == "L") return m.L;
                          if (param == "Jxy") return m.Jxy;
                          if (param == "Jzz") return m.Jzz;
                          if (param == "g") return m.g;
                          if (param == "site") return m.site;
                          if (param == "dt") return m.dt;
                          return std::nan("");
                        },
                    },
                    model);
}

int as_int_param(double v, const std::string& param) {
  if (std::floor(v) != v) invalid("sweep.values", "parameter '" + param + "' needs integer values");
  return static_cast<int>(v);
}

void set_model_param(ModelSpec& model, const std::string& param, double v) {
  std::visit(overloaded{
                 [&](KickedTop& m) {
                   if (param == "j") m.j = v;
                   else if (param == "lambda") m.lambda = v;
                   else if (param == "alpha") m.alpha = v;
                 },
                 [&](KickedIsing& m) {
                   if (param == "L") m.L = as_int_param(v, param);
                   else if (param == "J") m.J = v;
                   else if (param == "hx") m.hx = v;
                   else if (param == "hz") m.hz = v;
                 },
                 [&](TiltedIsing& m) {
                   if (param == "L") m.L = as_int_param(v, param);
                   else if (param == "J") m.J = v;
                   else if (param == "hx") m.hx = v;
                   else if (param == "hz") m.hz = v;
                   else if (param == "dt") m.dt = v;
                 },
                 [&](XXZ& m) {
                   if (param == "L") m.L = as_int_param(v, param);
                   else if (param == "Jxy") m.Jxy = v;
                   else if (param == "Jzz") m.Jzz = v;
                   else if (param == "g") m.g = v;
                   else if (param == "site") m.site = as_int_param(v, param);
                   else if (param == "dt") m.dt = v;
                 },
             },
             model);
}

bool is_config_param(const std::string& p) {
  return p == "none" || p == "sigma" || p == "delta_lambda" || p == "eta" || p == "theta" || p == "phi";
}

bool is_chain(const ModelSpec& m) { return !std::holds_alternative<KickedTop>(m); }

int chain_length(const ModelSpec& m) {
  return std::visit(overloaded{
                        [](const KickedTop&) { return 0; },
                        [](const auto& c) { return c.L; },
                    },
                    m);
}

bool is_hamiltonian(const ModelSpec& m) {
  return std::holds_alternative<TiltedIsing>(m) || std::holds_alternative<XXZ>(m);
}

double model_dt(const ModelSpec& m) {
  if (const auto* t = std::get_if<TiltedIsing>(&m)) return t->dt;
  if (const auto* x = std::get_if<XXZ>(&m)) return x->dt;
  return 1.0;
}

CMat hamiltonian_of(const ModelSpec& m) {
  if (const auto* t = std::get_if<TiltedIsing>(&m)) return ti_hamiltonian(*t);
  if (const auto* x = std::get_if<XXZ>(&m)) return xxz_hamiltonian(*x);
  throw Error(ErrorCode::kPrecondition, "model has no time-independent Hamiltonian");
}

// Parallel loop over [0, n); exceptions are rethrown in index order.
void parallel_for(int n, int threads, const std::function<void(int)>& fn) {
  int workers = threads > 0 ? threads : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  workers = std::min(workers, n);
  if (workers <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(n));
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          errors[static_cast<std::size_t>(i)] = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
}

struct Stat {
  double mean = 0.0;
  double stderr_ = 0.0;
  int n = 0;
};

Stat summarize(const std::vector<double>& xs) {
  Stat s;
  s.n = static_cast<int>(xs.size());
  if (s.n == 0) return s;
  double sum = 0.0;
  for (double x : xs) sum += x;
  s.mean = sum / s.n;
  if (s.n > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - s.mean) * (x - s.mean);
    s.stderr_ = std::sqrt(ss / (s.n - 1)) / std::sqrt(static_cast<double>(s.n));
  }
  return s;
}

class TableBuilder {
 public:
  TableBuilder(ResultTable& table, std::string param, double value)
      : table_(table), param_(std::move(param)), value_(value) {}

  void value(int step, const std::string& metric, double v) { table_.rows.push_back({param_, value_, step, metric, v, 0.0, 1}); }

  void stat(int step, const std::string& metric, const std::vector<double>& samples) {
    const Stat s = summarize(samples);
    table_.rows.push_back({param_, value_, step, metric, s.mean, s.stderr_, s.n});
  }

  // samples[state][k] aggregated over states for every k.
  void series(const std::vector<int>& steps, const std::string& metric,
              const std::vector<std::vector<double>>& samples) {
    for (std::size_t k = 0; k < steps.size(); ++k) {
      std::vector<double> column;
      column.reserve(samples.size());
      for (const auto& row : samples) column.push_back(row[k]);
      stat(steps[k], metric, column);
    }
  }

 private:
  ResultTable& table_;
  std::string param_;
  double value_;
};

CVec initial_state(const ExperimentConfig& cfg, int d, int state_index) {
  if (cfg.state == InitialState::kCoherent) {
    const auto* kt = std::get_if<KickedTop>(&cfg.model);
    if (kt == nullptr) invalid("state.kind", "coherent states need the kicked-top model");
    return spin_coherent(kt->j, cfg.theta, cfg.phi);
  }
  std::mt19937_64 rng(derive_seed(cfg.seed, 0, static_cast<std::uint64_t>(state_index) + 1, kStreamState));
  return haar_random_pure(d, rng);
}

std::string observable_name(const ExperimentConfig& cfg) {
  if (!cfg.observable.empty()) return cfg.observable;
  if (cfg.experiment == ExperimentKind::kPerturb) return "random-J_x";
  return default_observable(cfg.model);
}

CMat config_observable(const ExperimentConfig& cfg) {
  return build_observable(observable_name(cfg), cfg.model, derive_seed(cfg.seed, 0, 0, kStreamObservable));
}

std::uint64_t noise_seed(const ExperimentConfig& cfg, std::size_t sweep_index, int state_index) {
  return derive_seed(cfg.seed, sweep_index + 1, static_cast<std::uint64_t>(state_index) + 1, kStreamNoise);
}

void add_quantifier_rows(TableBuilder& tb, const QuantifierSeries& qs, const std::string& suffix) {
  for (std::size_t k = 0; k < qs.times.size(); ++k) tb.value(qs.times[k], "shannon" + suffix, qs.shannon[k]);
  for (std::size_t k = 0; k < qs.times.size(); ++k) tb.value(qs.times[k], "fisher" + suffix, qs.fisher[k]);
  for (std::size_t k = 0; k < qs.times.size(); ++k) tb.value(qs.times[k], "rank" + suffix, qs.rank[k]);
  for (std::size_t k = 0; k < qs.times.size(); ++k) tb.value(qs.times[k], "mutual_info" + suffix, qs.mutual_info[k]);
}

std::vector<int> index_schedule(int last, int stride) {
  std::vector<int> out;
  for (int n = 0; n < last; n += stride) out.push_back(n);
  out.push_back(last);
  return out;
}

void run_tomo(const ExperimentConfig& cfg, std::size_t vi, TableBuilder& tb, std::atomic<int>& nonconverged) {
  const UnitaryPropagator u = make_propagator(cfg.model);
  const int d = static_cast<int>(u.dim());
  const CMat obs = config_observable(cfg);
  const OperatorTimeline timeline = heisenberg_timeline(obs, u, cfg.steps - 1);
  const HermitianBasis basis = gell_mann_basis(d);
  const std::vector<int> prefixes = prefix_schedule(cfg.steps, cfg.stride);
  const Reconstructor rec(timeline, basis, prefixes, cfg.rank_tol, cfg.solver);
  add_quantifier_rows(tb, quantifier_series(timeline, basis, prefixes, cfg.rank_tol), "");

  const auto n = static_cast<std::size_t>(cfg.n_states);
  std::vector<std::vector<double>> fid(n), dhs(n), align(n);
  parallel_for(cfg.n_states, cfg.threads, [&](int s) {
    const auto si = static_cast<std::size_t>(s);
    const CVec psi = initial_state(cfg, d, s);
    const CMat rho = pure_density(psi);
    const MeasurementRecord record = generate_record(rho, timeline, cfg.sigma, noise_seed(cfg, vi, s));
    const std::vector<double> al = state_operator_alignment(timeline, basis, bloch_encode(rho, basis));
    for (int p : prefixes) {
      const ReconstructionResult r = rec.reconstruct(record.values, p, psi);
      if (!r.converged) ++nonconverged;
      fid[si].push_back(r.fidelity);
      dhs[si].push_back(hilbert_schmidt_distance(psi, r.rho_bar));
      align[si].push_back(al[static_cast<std::size_t>(p - 1)]);
    }
  });
  tb.series(prefixes, "fidelity", fid);
  tb.series(prefixes, "hs_distance", dhs);
  tb.series(prefixes, "alignment", align);
}

void run_perturb(const ExperimentConfig& cfg, std::size_t vi, TableBuilder& tb, std::atomic<int>& nonconverged) {
  const auto* kt = std::get_if<KickedTop>(&cfg.model);
  if (kt == nullptr) invalid("model.type", "perturb needs the kicked-top model");
  const PerturbedPair pair = perturbed_kicked_top(*kt, cfg.delta_lambda);
  const int d = static_cast<int>(pair.u_true.dim());
  const CMat obs = config_observable(cfg);
  const OperatorTimeline tl_true = heisenberg_timeline(obs, pair.u_true, cfg.steps - 1);
  const OperatorTimeline tl_model = heisenberg_timeline(obs, pair.u_model, cfg.steps - 1);
  const HermitianBasis basis = gell_mann_basis(d);
  const std::vector<int> prefixes = prefix_schedule(cfg.steps, cfg.stride);
  const Reconstructor model(tl_model, basis, prefixes, cfg.rank_tol, cfg.solver);

  const std::vector<int> indices = index_schedule(cfg.steps - 1, cfg.stride);
  std::vector<double> echo(indices.size()), dkl(indices.size()), incompat(indices.size());
  parallel_for(static_cast<int>(indices.size()), cfg.threads, [&](int k) {
    const auto n = static_cast<std::size_t>(indices[static_cast<std::size_t>(k)]);
    echo[static_cast<std::size_t>(k)] = operator_loschmidt_echo(tl_true[n], tl_model[n], obs);
    dkl[static_cast<std::size_t>(k)] = operator_relative_entropy(tl_true[n], tl_model[n]);
    incompat[static_cast<std::size_t>(k)] = operator_incompatibility(tl_true[n], tl_model[n], kt->j);
  });
  for (std::size_t k = 0; k < indices.size(); ++k) tb.value(indices[k], "loschmidt_echo", echo[k]);
  for (std::size_t k = 0; k < indices.size(); ++k) tb.value(indices[k], "relative_entropy", dkl[k]);
  for (std::size_t k = 0; k < indices.size(); ++k) tb.value(indices[k], "incompatibility", incompat[k]);

  const auto n = static_cast<std::size_t>(cfg.n_states);
  std::vector<std::vector<double>> fid(n), ideal(n);
  parallel_for(cfg.n_states, cfg.threads, [&](int s) {
    const auto si = static_cast<std::size_t>(s);
    const CVec psi = initial_state(cfg, d, s);
    const CMat rho = pure_density(psi);
    const std::uint64_t ns = noise_seed(cfg, vi, s);
    const TomographyRun run = mismatched_reconstruction(generate_record(rho, tl_true, cfg.sigma, ns), model, psi);
    for (const auto& r : run.results)
      if (!r.converged) ++nonconverged;
    fid[si] = run.fidelity;
    if (cfg.include_ideal) {
      const TomographyRun base = mismatched_reconstruction(generate_record(rho, tl_model, cfg.sigma, ns), model, psi);
      for (const auto& r : base.results)
        if (!r.converged) ++nonconverged;
      ideal[si] = base.fidelity;
    }
  });
  tb.series(prefixes, "fidelity", fid);
  if (cfg.include_ideal) tb.series(prefixes, "fidelity_ideal", ideal);
}

void run_krylov(const ExperimentConfig& cfg, TableBuilder& tb) {
  const UnitaryPropagator u = make_propagator(cfg.model);
  const CMat obs = config_observable(cfg);
  if (!is_hamiltonian(cfg.model)) {
    tb.value(0, "K", arnoldi_unitary_dim(u.matrix, obs));
    const OperatorTimeline timeline = heisenberg_timeline(obs, u, cfg.steps - 1);
    const HermitianBasis basis = gell_mann_basis(static_cast<int>(u.dim()));
    const std::vector<int> prefixes = prefix_schedule(cfg.steps, cfg.stride);
    const RMat full = CovarianceData::build(timeline, basis, cfg.rank_tol).design();
    for (int p : prefixes) tb.value(p, "rank", CovarianceData::from_design(full.topRows(p), cfg.rank_tol).rank());
    return;
  }
  const CMat h = hamiltonian_of(cfg.model);
  const KrylovBasis kb = lanczos_full_orth(Superoperator::liouvillian(h), obs);
  tb.value(0, "K", kb.dim());
  tb.value(0, "K_unitary", arnoldi_unitary_dim(u.matrix, obs));
  for (std::size_t k = 0; k < kb.b.size(); ++k) tb.value(static_cast<int>(k) + 1, "lanczos_b", kb.b[k]);

  const auto [energies, vecs] = eigh(h);
  const CMat rotated = vecs.adjoint() * obs * vecs;
  const double dt = model_dt(cfg.model);
  const std::vector<int> indices = index_schedule(cfg.steps, cfg.stride);
  std::vector<double> complexity(indices.size()), entropy(indices.size());
  parallel_for(static_cast<int>(indices.size()), cfg.threads, [&](int k) {
    const double t = dt * indices[static_cast<std::size_t>(k)];
    CMat evolved = rotated;
    for (Eigen::Index a = 0; a < evolved.rows(); ++a)
      for (Eigen::Index b = 0; b < evolved.cols(); ++b) evolved(a, b) *= std::exp(kI * ((energies(a) - energies(b)) * t));
    const KrylovAmplitudes amp = krylov_amplitudes(vecs * evolved * vecs.adjoint(), kb);
    complexity[static_cast<std::size_t>(k)] = krylov_complexity(amp);
    entropy[static_cast<std::size_t>(k)] = krylov_entropy(amp);
  });
  for (std::size_t k = 0; k < indices.size(); ++k) tb.value(indices[k], "krylov_complexity", complexity[k]);
  for (std::size_t k = 0; k < indices.size(); ++k) tb.value(indices[k], "krylov_entropy", entropy[k]);
}

void run_rmt_compare(const ExperimentConfig& cfg, std::size_t vi, TableBuilder& tb) {
  const UnitaryPropagator u = make_propagator(cfg.model);
  const int d = static_cast<int>(u.dim());
  const CMat obs = config_observable(cfg);
  const HermitianBasis basis = gell_mann_basis(d);
  const std::vector<int> prefixes = prefix_schedule(cfg.steps, cfg.stride);
  add_quantifier_rows(tb, quantifier_series(heisenberg_timeline(obs, u, cfg.steps - 1), basis, prefixes, cfg.rank_tol),
                      "");

  const bool blocks = cfg.reflection_blocks && is_chain(cfg.model);
  const ReflectionBasis rb = blocks ? reflection_eigenbasis(chain_length(cfg.model)) : ReflectionBasis{};
  const bool gaussian = cfg.ensemble == EnsembleKind::kGOE || cfg.ensemble == EnsembleKind::kGUE;
  const auto n = static_cast<std::size_t>(cfg.rmt_samples);
  std::vector<QuantifierSeries> series(n);
  parallel_for(cfg.rmt_samples, cfg.threads, [&](int s) {
    EnsembleSpec spec{cfg.ensemble, d, {}, derive_seed(cfg.seed, vi + 1, static_cast<std::uint64_t>(s) + 1, kStreamEnsemble)};
    CMat m;
    if (blocks) {
      spec.block_dims = {rb.plus_dim, rb.minus_dim};
      m = block_diagonal_sample(spec, rb.vectors);
    } else {
      m = sample_ensemble(spec);
    }
    const CMat ur = gaussian ? expm_hermitian(0.5 * (m + m.adjoint()), model_dt(cfg.model)) : m;
    const UnitaryPropagator prop{ur, StepSemantics::kFloquet, 1.0};
    series[static_cast<std::size_t>(s)] =
        quantifier_series(heisenberg_timeline(obs, prop, cfg.steps - 1), basis, prefixes, cfg.rank_tol);
  });
  auto collect = [&](auto member) {
    std::vector<std::vector<double>> out(n);
    for (std::size_t s = 0; s < n; ++s)
      for (auto x : series[s].*member) out[s].push_back(static_cast<double>(x));
    return out;
  };
  tb.series(prefixes, "shannon_rmt", collect(&QuantifierSeries::shannon));
  tb.series(prefixes, "fisher_rmt", collect(&QuantifierSeries::fisher));
  tb.series(prefixes, "rank_rmt", collect(&QuantifierSeries::rank));
  tb.series(prefixes, "mutual_info_rmt", collect(&QuantifierSeries::mutual_info));
}

void run_ordered_bloch(const ExperimentConfig& cfg, TableBuilder& tb, std::atomic<int>& nonconverged) {
  const int d = hilbert_dim(cfg.model);
  const HermitianBasis basis = gell_mann_basis(d);
  const int m = static_cast<int>(basis.size());
  const std::vector<int> counts = prefix_schedule(m, cfg.stride);
  const bool perturbed = cfg.eta > 0.0 || cfg.sweep.param == "eta";
  HermitianBasis actual = basis;
  if (perturbed) {
    std::mt19937_64 rng(derive_seed(cfg.seed, 0, 0, kStreamBasisRotation));
    const CMat ur = haar_unitary(d, rng);
    actual = fractional_unitary_perturb(basis, ur, cfg.eta);
    tb.value(0, "ur_distance", (fractional_power(ur, cfg.eta) - CMat::Identity(d, d)).norm());
  }
  const auto n = static_cast<std::size_t>(cfg.n_states);
  std::vector<std::vector<double>> desc(n), asc(n), fd(n), fa(n);
  parallel_for(cfg.n_states, cfg.threads, [&](int s) {
    const auto si = static_cast<std::size_t>(s);
    const CVec psi = initial_state(cfg, d, s);
    const OrderedBloch od = ordered_bloch_values(pure_density(psi), basis, SortOrder::kDescending);
    const OrderedBloch oa = ordered_bloch_values(pure_density(psi), basis, SortOrder::kAscending);
    for (int c : counts) {
      desc[si].push_back(od.partial_sums[static_cast<std::size_t>(c - 1)]);
      asc[si].push_back(oa.partial_sums[static_cast<std::size_t>(c - 1)]);
    }
    if (perturbed) {
      SolverOptions opts = cfg.solver;
      fd[si] = ordered_basis_fidelity(psi, basis, actual, SortOrder::kDescending, counts, opts);
      fa[si] = ordered_basis_fidelity(psi, basis, actual, SortOrder::kAscending, counts, opts);
    }
  });
  (void)nonconverged;
  tb.series(counts, "bloch_desc", desc);
  tb.series(counts, "bloch_asc", asc);
  auto shift = [&](std::vector<std::vector<double>> v) {
    for (auto& row : v)
      for (double& x : row) x += 1.0 / d;
    return v;
  };
  tb.series(counts, "bound_desc", shift(desc));
  tb.series(counts, "bound_asc", shift(asc));
  if (perturbed) {
    tb.series(counts, "fidelity_desc", fd);
    tb.series(counts, "fidelity_asc", fa);
  }
}

void run_phase_space(const ExperimentConfig& cfg, TableBuilder& tb) {
  const auto* kt = std::get_if<KickedTop>(&cfg.model);
  if (kt == nullptr) invalid("model.type", "phase-space needs the kicked-top model");
  for (int s = 0; s < cfg.n_states; ++s) {
    std::mt19937_64 rng(derive_seed(cfg.seed, 0, static_cast<std::uint64_t>(s) + 1, kStreamOrbit));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double z = 2.0 * unit(rng) - 1.0;
    const double az = 2.0 * kPi * unit(rng);
    const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
    SpinVector v{rho * std::cos(az), rho * std::sin(az), z};
    const std::string tag = "orbit" + std::to_string(s) + "_";
    for (int n = 0; n <= cfg.steps; ++n) {
      tb.value(n, tag + "X", v.x);
      tb.value(n, tag + "Y", v.y);
      tb.value(n, tag + "Z", v.z);
      v = classical_kicked_top_step(v, kt->lambda, kt->alpha);
    }
  }
  const UnitaryPropagator u = make_propagator(cfg.model);
  const OperatorTimeline timeline = heisenberg_timeline(config_observable(cfg), u, cfg.steps);
  const SphereGrid grid = SphereGrid::gauss_legendre(cfg.quad_theta, cfg.quad_phi);
  const CMat table = coherent_state_table(kt->j, grid);
  const std::vector<int> indices = index_schedule(cfg.steps, cfg.stride);
  std::vector<double> ent(indices.size());
  parallel_for(static_cast<int>(indices.size()), cfg.threads, [&](int k) {
    ent[static_cast<std::size_t>(k)] =
        husimi_entropy(timeline[static_cast<std::size_t>(indices[static_cast<std::size_t>(k)])], grid, table);
  });
  for (std::size_t k = 0; k < indices.size(); ++k) tb.value(indices[k], "husimi_entropy", ent[k]);
}

std::string format_number(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return buf;
}

}  // namespace

const char* tool_version() { return CMTLAB_VERSION; }

const char* to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::kPhaseSpace: return "phase-space";
    case ExperimentKind::kTomo: return "tomo";
    case ExperimentKind::kKrylov: return "krylov";
    case ExperimentKind::kPerturb: return "perturb";
    case ExperimentKind::kRmtCompare: return "rmt-compare";
    case ExperimentKind::kOrderedBloch: return "ordered-bloch";
  }
  return "unknown";
}

std::string default_observable(const ModelSpec& model) {
  return std::holds_alternative<KickedTop>(model) ? "J_y" : "s1y";
}

std::vector<std::string> known_observables() {
  return {"J_x", "J_y", "J_z", "random-J_x", "s<k>x", "s<k>y", "s<k>z", "Sx", "Sy", "Sz", "random-local",
          "<term>+<term>"};
}

CMat build_observable(const std::string& name, const ModelSpec& model, std::uint64_t seed) {
  auto unknown = [&](const std::string& term) -> Error {
    std::string list;
    for (const auto& k : known_observables()) list += (list.empty() ? "" : ", ") + k;
    return Error(ErrorCode::kUnknownObservable,
                 "unknown observable '" + term + "' for model " + model_name(model) + "; known: " + list);
  };
  const int d = hilbert_dim(model);
  CMat total = CMat::Zero(d, d);
  std::size_t start = 0;
  int term_index = 0;
  while (start <= name.size()) {
    const auto plus = name.find('+', start);
    const std::string term = name.substr(start, plus == std::string::npos ? std::string::npos : plus - start);
    if (term.empty()) throw unknown(name);
    std::mt19937_64 rng(derive_seed(seed, static_cast<std::uint64_t>(term_index)));
    if (const auto* kt = std::get_if<KickedTop>(&model)) {
      const AngularMomentum jm = angular_momentum_ops(kt->j);
      if (term == "J_x") total += jm.x;
      else if (term == "J_y") total += jm.y;
      else if (term == "J_z") total += jm.z;
      else if (term == "random-J_x") {
        const CMat v = haar_unitary(d, rng);
        total += v.adjoint() * jm.x * v;
      } else {
        throw unknown(term);
      }
    } else {
      const int L = chain_length(model);
      if (term.size() == 2 && term[0] == 'S' && std::string("xyz").find(term[1]) != std::string::npos) {
        total += collective_spin(L, parse_axis(term[1], "observable"));
      } else if (term == "random-local") {
        const CMat u = haar_unitary(2, rng);
        CMat local = u.adjoint() * (0.5 * pauli(Axis::kY)) * u;
        for (int s = 2; s <= L; ++s) local = kron(local, CMat::Identity(2, 2));
        total += local;
      } else if (term.size() >= 3 && term[0] == 's' && std::string("xyz").find(term.back()) != std::string::npos) {
        const std::string digits = term.substr(1, term.size() - 2);
        if (digits.empty() || !std::all_of(digits.begin(), digits.end(), ::isdigit)) throw unknown(term);
        const int site = std::stoi(digits);
        if (site < 1 || site > L) throw unknown(term);
        total += site_spin(L, site, parse_axis(term.back(), "observable"));
      } else {
        throw unknown(term);
      }
    }
    ++term_index;
    if (plus == std::string::npos) break;
    start = plus + 1;
  }
  return total;
}

ExperimentConfig apply_sweep_value(const ExperimentConfig& config, double value) {
  ExperimentConfig out = config;
  const std::string& p = config.sweep.param;
  if (p == "none") return out;
  if (p == "sigma") out.sigma = value;
  else if (p == "delta_lambda") out.delta_lambda = value;
  else if (p == "eta") out.eta = value;
  else if (p == "theta") out.theta = value;
  else if (p == "phi") out.phi = value;
  else set_model_param(out.model, p, value);
  return out;
}

ExperimentConfig parse_config(const std::string& json_text, const std::vector<std::string>& overrides) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kInvalidConfig, std::string("config is not valid JSON: ") + e.what());
  }
  if (!root.is_object()) invalid("<root>", "config must be a JSON object");
  for (const auto& o : overrides) apply_override(root, o);
  check_keys(root, "", {"experiment", "model", "observable", "steps", "sigma", "n_states", "sweep", "seed", "output",
                        "state", "stride", "delta_lambda", "eta", "include_ideal", "quadrature", "rmt", "rank_tol",
                        "solver", "threads", "provenance"});

  ExperimentConfig cfg;
  if (!root.contains("experiment")) invalid("experiment", "is required");
  cfg.experiment = parse_kind(get_string(root, "experiment", "", ""));
  if (!root.contains("model")) invalid("model", "is required");
  cfg.model = parse_model(root.at("model"));
  try {
    validate(cfg.model);
  } catch (const Error& e) {
    invalid("model", e.what());
  }
  cfg.observable = get_string(root, "observable", "", "");

  const int d = hilbert_dim(cfg.model);
  const bool chapter3 = (cfg.experiment == ExperimentKind::kTomo) && std::holds_alternative<KickedTop>(cfg.model);
  const long long steps = get_integer(root, "steps", "", chapter3 ? 2LL * d * d : 50);
  if (steps < 1 || steps > 100000) invalid("steps", "must lie in [1, 100000]");
  cfg.steps = static_cast<int>(steps);
  cfg.sigma = get_number(root, "sigma", "", kDefaultSigma);
  if (cfg.sigma < 0.0) invalid("sigma", "must be >= 0");
  const long long n_states = get_integer(root, "n_states", "", default_n_states(cfg.experiment));
  if (n_states < 1 || n_states > 100000) invalid("n_states", "must lie in [1, 100000]");
  cfg.n_states = static_cast<int>(n_states);

  if (root.contains("sweep")) {
    const json& s = root.at("sweep");
    check_keys(s, "sweep", {"param", "values"});
    cfg.sweep.param = get_string(s, "param", "sweep", "none");
    if (!s.contains("values") || !s.at("values").is_array()) invalid("sweep.values", "must be an array of numbers");
    cfg.sweep.values.clear();
    for (const auto& v : s.at("values")) {
      if (!v.is_number()) invalid("sweep.values", "must contain numbers only");
      cfg.sweep.values.push_back(v.get<double>());
    }
    if (cfg.sweep.values.empty()) invalid("sweep.values", "must be nonempty");
  }
  if (!is_config_param(cfg.sweep.param) && std::isnan(model_param(cfg.model, cfg.sweep.param))) {
    invalid("sweep.param", "'" + cfg.sweep.param + "' is not a parameter of model " + model_name(cfg.model));
  }

  if (root.contains("seed")) {
    const json& s = root.at("seed");
    if (!s.is_number_unsigned() && !(s.is_number_integer() && s.get<long long>() >= 0)) {
      invalid("seed", "must be a non-negative integer");
    }
    cfg.seed = s.get<std::uint64_t>();
  }
  cfg.output_path = get_string(root, "output", "", "");

  if (root.contains("state")) {
    const json& s = root.at("state");
    check_keys(s, "state", {"kind", "theta", "phi"});
    const std::string kind = get_string(s, "kind", "state", "haar");
    if (kind == "haar") cfg.state = InitialState::kHaar;
    else if (kind == "coherent") cfg.state = InitialState::kCoherent;
    else invalid("state.kind", "must be haar or coherent");
    cfg.theta = get_number(s, "theta", "state", cfg.theta);
    cfg.phi = get_number(s, "phi", "state", cfg.phi);
  }
  if (cfg.state == InitialState::kCoherent && !std::holds_alternative<KickedTop>(cfg.model)) {
    invalid("state.kind", "coherent states need the kicked-top model");
  }
  if (cfg.theta < 0.0 || cfg.theta > kPi) invalid("state.theta", "must lie in [0, pi]");

  const long long stride = get_integer(root, "stride", "", 1);
  if (stride < 1) invalid("stride", "must be >= 1");
  cfg.stride = static_cast<int>(stride);
  cfg.delta_lambda = get_number(root, "delta_lambda", "", cfg.delta_lambda);
  cfg.eta = get_number(root, "eta", "", cfg.eta);
  if (cfg.eta < 0.0 || cfg.eta > 1.0) invalid("eta", "must lie in [0, 1]");
  cfg.include_ideal = get_bool(root, "include_ideal", "", cfg.include_ideal);

  if (root.contains("quadrature")) {
    const json& q = root.at("quadrature");
    check_keys(q, "quadrature", {"n_theta", "n_phi"});
    cfg.quad_theta = static_cast<int>(get_integer(q, "n_theta", "quadrature", cfg.quad_theta));
    cfg.quad_phi = static_cast<int>(get_integer(q, "n_phi", "quadrature", cfg.quad_phi));
    if (cfg.quad_theta < 2 || cfg.quad_phi < 2) invalid("quadrature", "resolutions must be >= 2");
  }
  if (root.contains("rmt")) {
    const json& r = root.at("rmt");
    check_keys(r, "rmt", {"ensemble", "samples", "reflection_blocks"});
    cfg.ensemble = parse_ensemble(get_string(r, "ensemble", "rmt", "COE"));
    cfg.rmt_samples = static_cast<int>(get_integer(r, "samples", "rmt", cfg.rmt_samples));
    if (cfg.rmt_samples < 1) invalid("rmt.samples", "must be >= 1");
    cfg.reflection_blocks = get_bool(r, "reflection_blocks", "rmt", cfg.reflection_blocks);
  }
  cfg.rank_tol = get_number(root, "rank_tol", "", cfg.rank_tol);
  if (!(cfg.rank_tol > 0.0 && cfg.rank_tol < 1.0)) invalid("rank_tol", "must lie in (0, 1)");
  if (root.contains("solver")) {
    const json& s = root.at("solver");
    check_keys(s, "solver", {"kkt_tol", "max_iter", "polish_tol", "polish_iter"});
    cfg.solver.kkt_tol = get_number(s, "kkt_tol", "solver", cfg.solver.kkt_tol);
    cfg.solver.max_iter = static_cast<int>(get_integer(s, "max_iter", "solver", cfg.solver.max_iter));
    cfg.solver.polish_tol = get_number(s, "polish_tol", "solver", cfg.solver.polish_tol);
    cfg.solver.polish_iter = static_cast<int>(get_integer(s, "polish_iter", "solver", cfg.solver.polish_iter));
    if (!(cfg.solver.kkt_tol > 0.0)) invalid("solver.kkt_tol", "must be positive");
    if (cfg.solver.max_iter < 1) invalid("solver.max_iter", "must be >= 1");
    if (cfg.solver.polish_iter < 0) invalid("solver.polish_iter", "must be >= 0");
  }
  const long long threads = get_integer(root, "threads", "", 0);
  if (threads < 0 || threads > 1024) invalid("threads", "must lie in [0, 1024]");
  cfg.threads = static_cast<int>(threads);
  cfg.provenance = get_string(root, "provenance", "", "");

  // Every sweep value must produce a valid model, and the observable must
  // exist for it.
  for (double v : cfg.sweep.values) {
    const ExperimentConfig probe = apply_sweep_value(cfg, v);
    try {
      validate(probe.model);
    } catch (const Error& e) {
      invalid("sweep.values", "value " + format_number(v) + " gives an invalid model: " + e.what());
    }
    if (probe.sigma < 0.0) invalid("sweep.values", "sigma must be >= 0");
    if (probe.eta < 0.0 || probe.eta > 1.0) invalid("sweep.values", "eta must lie in [0, 1]");
    build_observable(observable_name(probe), probe.model, 0);
  }

  cfg.canonical = root.dump();
  return cfg;
}

std::string config_hash(const ExperimentConfig& config) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : config.canonical) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

RunResult run_experiment(const ExperimentConfig& config) {
  RunResult out;
  ResultTable& table = out.table;
  table.comments.push_back(std::string("cmtlab ") + tool_version());
  table.comments.push_back("config_hash: " + config_hash(config));
  table.comments.push_back("seed: " + std::to_string(config.seed));
  table.comments.push_back(std::string("experiment: ") + to_string(config.experiment));
  table.comments.push_back("model: " + model_name(config.model));
  if (!config.provenance.empty()) table.comments.push_back("provenance: " + config.provenance);
  table.comments.push_back("units: N_s = 1, sigma is the per-sample record spread, Fisher information is dimensionless");
  table.comments.push_back("streams: derive_seed(seed, sweep_index + 1, state_index + 1, tag)");

  std::atomic<int> nonconverged{0};
  for (std::size_t vi = 0; vi < config.sweep.values.size(); ++vi) {
    const ExperimentConfig cfg = apply_sweep_value(config, config.sweep.values[vi]);
    TableBuilder tb(table, config.sweep.param, config.sweep.values[vi]);
    switch (cfg.experiment) {
      case ExperimentKind::kTomo: run_tomo(cfg, vi, tb, nonconverged); break;
      case ExperimentKind::kPerturb: run_perturb(cfg, vi, tb, nonconverged); break;
      case ExperimentKind::kKrylov: run_krylov(cfg, tb); break;
      case ExperimentKind::kRmtCompare: run_rmt_compare(cfg, vi, tb); break;
      case ExperimentKind::kOrderedBloch: run_ordered_bloch(cfg, tb, nonconverged); break;
      case ExperimentKind::kPhaseSpace: run_phase_space(cfg, tb); break;
    }
  }
  out.nonconverged = nonconverged.load();
  return out;
}

void write_csv(const ResultTable& table, std::ostream& out) {
  for (const auto& c : table.comments) out << "# " << c << '\n';
  out << "sweep_param,sweep_value,step,metric,mean,stderr,n\n";
  for (const auto& r : table.rows) {
    out << r.sweep_param << ',' << format_number(r.sweep_value) << ',' << r.step << ',' << r.metric << ','
        << format_number(r.mean) << ',' << format_number(r.stderr_) << ',' << r.n << '\n';
  }
}

}  // namespace cmt
