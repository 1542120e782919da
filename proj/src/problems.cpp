#include "most/problems.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

#include "most/rng.hpp"

namespace most {

namespace {

Vector logistic(const Vector& theta) {
  return (1.0 / (1.0 + (-theta.array()).exp())).matrix();
}

constexpr double kPi = 3.14159265358979323846;

}  // namespace

// ---------------------------------------------------------------------------
// ZDT

void ZdtSpec::validate() const {
  if (variant < 1 || variant > 3) {
    throw std::invalid_argument("ZdtSpec: variant must be 1, 2, or 3");
  }
  if (dim < 2) {
    throw std::invalid_argument("ZdtSpec: dim must be >= 2");
  }
}

double zdt_eval(const ZdtSpec& spec, int objective, const Vector& theta,
                Vector* grad) {
  spec.validate();
  if (objective < 0 || objective > 1) {
    throw std::out_of_range("zdt_eval: objective must be 0 or 1");
  }
  if (theta.size() != spec.dim) {
    throw std::invalid_argument("zdt_eval: parameter dimension mismatch");
  }
  if (!theta.allFinite()) {
    throw std::invalid_argument("zdt_eval: parameters must be finite");
  }

  const Eigen::Index dim = spec.dim;
  Vector x, dx;
  if (spec.squash) {
    x = logistic(theta);
    dx = (x.array() * (1.0 - x.array())).matrix();
  } else {
    x = theta;
    dx = Vector::Ones(dim);
  }

  const double f1 = x[0];
  if (objective == 0) {
    if (grad) {
      *grad = Vector::Zero(dim);
      (*grad)[0] = dx[0];
    }
    return f1;
  }

  const double gcoef = 9.0 / static_cast<double>(dim - 1);
  const double g = 1.0 + gcoef * x.tail(dim - 1).sum();

  double f2;
  double df2_dg;
  double rest_df2_df1;  // df2/df1 minus the -0.5 sqrt(g/f1) piece
  bool has_sqrt;
  switch (spec.variant) {
    case 1:
      f2 = g - std::sqrt(f1 * g);
      df2_dg = 1.0 - 0.5 * std::sqrt(f1 / g);
      rest_df2_df1 = 0.0;
      has_sqrt = true;
      break;
    case 2:
      f2 = g - f1 * f1 / g;
      df2_dg = 1.0 + (f1 / g) * (f1 / g);
      rest_df2_df1 = -2.0 * f1 / g;
      has_sqrt = false;
      break;
    default: {  // 3
      const double s = std::sin(10.0 * kPi * f1);
      const double c = std::cos(10.0 * kPi * f1);
      f2 = g - std::sqrt(f1 * g) - f1 * s;
      df2_dg = 1.0 - 0.5 * std::sqrt(f1 / g);
      rest_df2_df1 = -s - 10.0 * kPi * f1 * c;
      has_sqrt = true;
      break;
    }
  }

  if (grad) {
    grad->resize(dim);
    double d_theta0 = rest_df2_df1 * dx[0];
    if (has_sqrt) {
      if (spec.squash) {
        // -0.5 sqrt(g/x1) * x1 (1 - x1) stays finite as x1 -> 0.
        d_theta0 += -0.5 * std::sqrt(g * f1) * (1.0 - f1);
      } else {
        d_theta0 += -0.5 * std::sqrt(g / std::max(f1, 1e-30));
      }
    }
    (*grad)[0] = d_theta0;
    for (Eigen::Index k = 1; k < dim; ++k) {
      (*grad)[k] = df2_dg * gcoef * dx[k];
    }
  }
  return f2;
}

namespace {

class ZdtFamily : public ObjectiveFamily {
 public:
  ZdtFamily(ZdtSpec spec, std::uint64_t seed) : spec_(spec), seed_(seed) {
    spec_.validate();
  }

  int n_objectives() const override { return 2; }
  int param_dim() const override { return spec_.dim; }
  double eval(int i, const Vector& theta, Vector* grad) const override {
    return zdt_eval(spec_, i, theta, grad);
  }
  std::string name() const override {
    return "zdt" + std::to_string(spec_.variant);
  }
  std::uint64_t seed() const override { return seed_; }

 private:
  ZdtSpec spec_;
  std::uint64_t seed_;
};

}  // namespace

Problem make_zdt_problem(const ZdtSpec& spec, std::uint64_t seed) {
  return Problem(std::make_shared<ZdtFamily>(spec, seed));
}

// ---------------------------------------------------------------------------
// Multi-client data

SplitCounts split_counts(int n_samples) {
  if (n_samples < 3) {
    throw std::invalid_argument("split_counts: need at least 3 samples per client");
  }
  SplitCounts c;
  c.train = static_cast<int>(std::lround(0.6 * n_samples));
  c.val = static_cast<int>(std::lround(0.2 * n_samples));
  c.train = std::max(1, c.train);
  c.val = std::max(1, c.val);
  while (c.train + c.val >= n_samples) {
    if (c.train > 1) --c.train; else --c.val;
  }
  c.test = n_samples - c.train - c.val;
  return c;
}

MultiClientData::MultiClientData(std::vector<ClientData> clients, int classes,
                                 int feature_dim, std::string name,
                                 std::uint64_t seed)
    : clients_(std::move(clients)), classes_(classes),
      feature_dim_(feature_dim), name_(std::move(name)), seed_(seed) {
  if (clients_.empty()) {
    throw std::invalid_argument("MultiClientData: no clients");
  }
  if (classes_ < 2 || feature_dim_ < 1) {
    throw std::invalid_argument("MultiClientData: degenerate shape");
  }
}

double multinomial_logistic_loss(const ClientSplit& split, int classes,
                                 const Vector& theta, Vector* grad) {
  const int d = static_cast<int>(split.x.cols());
  const int n = split.size();
  if (theta.size() != static_cast<Eigen::Index>(classes) * (d + 1)) {
    throw std::invalid_argument("multinomial_logistic_loss: parameter size mismatch");
  }
  Eigen::Map<const Matrix> w(theta.data(), classes, d);
  Eigen::Map<const Vector> b(theta.data() + classes * d, classes);
  if (grad) {
    grad->setZero(theta.size());
  }
  if (n == 0) return 0.0;

  Eigen::Map<Matrix> gw(grad ? grad->data() : nullptr, grad ? classes : 0,
                        grad ? d : 0);
  Eigen::Map<Vector> gb(grad ? grad->data() + classes * d : nullptr,
                        grad ? classes : 0);

  double total = 0.0;
  Vector logits(classes), p(classes);
  for (int s = 0; s < n; ++s) {
    const auto xs = split.x.row(s).transpose();
    logits.noalias() = w * xs;
    logits += b;
    const double zmax = logits.maxCoeff();
    p = (logits.array() - zmax).exp();
    const double norm = p.sum();
    total += std::log(norm) - (logits[split.y[s]] - zmax);
    if (grad) {
      p /= norm;
      p[split.y[s]] -= 1.0;
      gw.noalias() += p * xs.transpose();
      gb += p;
    }
  }
  total /= n;
  if (grad) *grad /= n;
  return total;
}

double MultiClientData::split_loss(const ClientSplit& split,
                                   const Vector& theta) const {
  return multinomial_logistic_loss(split, classes_, theta, nullptr);
}

double MultiClientData::split_accuracy(const ClientSplit& split,
                                       const Vector& theta) const {
  const int n = split.size();
  if (n == 0) return 0.0;
  Eigen::Map<const Matrix> w(theta.data(), classes_, feature_dim_);
  Eigen::Map<const Vector> b(theta.data() + classes_ * feature_dim_, classes_);
  int correct = 0;
  for (int s = 0; s < n; ++s) {
    Vector logits = w * split.x.row(s).transpose() + b;
    Eigen::Index pred = 0;
    logits.maxCoeff(&pred);
    if (pred == split.y[s]) ++correct;
  }
  return static_cast<double>(correct) / n;
}

Matrix MultiClientData::split_proba(const ClientSplit& split,
                                    const Vector& theta) const {
  Eigen::Map<const Matrix> w(theta.data(), classes_, feature_dim_);
  Eigen::Map<const Vector> b(theta.data() + classes_ * feature_dim_, classes_);
  Matrix proba(split.size(), classes_);
  for (int s = 0; s < split.size(); ++s) {
    Vector logits = w * split.x.row(s).transpose() + b;
    const double zmax = logits.maxCoeff();
    Vector p = (logits.array() - zmax).exp();
    proba.row(s) = (p / p.sum()).transpose();
  }
  return proba;
}

Matrix MultiClientData::val_loss_matrix(const std::vector<Vector>& solutions) const {
  Matrix losses(n_clients(), static_cast<Eigen::Index>(solutions.size()));
  for (int i = 0; i < n_clients(); ++i) {
    for (std::size_t j = 0; j < solutions.size(); ++j) {
      losses(i, static_cast<Eigen::Index>(j)) =
          split_loss(clients_[i].val, solutions[j]);
    }
  }
  return losses;
}

Matrix MultiClientData::test_accuracy_matrix(
    const std::vector<Vector>& solutions) const {
  Matrix acc(n_clients(), static_cast<Eigen::Index>(solutions.size()));
  for (int i = 0; i < n_clients(); ++i) {
    for (std::size_t j = 0; j < solutions.size(); ++j) {
      acc(i, static_cast<Eigen::Index>(j)) =
          split_accuracy(clients_[i].test, solutions[j]);
    }
  }
  return acc;
}

double MultiClientData::prediction_kl(const Vector& theta_a,
                                      const Vector& theta_b) const {
  double total = 0.0;
  long samples = 0;
  for (const ClientData& client : clients_) {
    const Matrix pa = split_proba(client.test, theta_a);
    const Matrix pb = split_proba(client.test, theta_b);
    for (Eigen::Index s = 0; s < pa.rows(); ++s) {
      double kl_ab = 0.0, kl_ba = 0.0;
      for (Eigen::Index c = 0; c < pa.cols(); ++c) {
        kl_ab += pa(s, c) * std::log(pa(s, c) / pb(s, c));
        kl_ba += pb(s, c) * std::log(pb(s, c) / pa(s, c));
      }
      total += 0.5 * (kl_ab + kl_ba);
      ++samples;
    }
  }
  return samples > 0 ? total / samples : 0.0;
}

double MultiClientData::label_distribution_tv() const {
  const int n = n_clients();
  Matrix hist = Matrix::Zero(n, classes_);
  for (int i = 0; i < n; ++i) {
    const auto& y = clients_[i].train.y;
    for (Eigen::Index s = 0; s < y.size(); ++s) hist(i, y[s]) += 1.0;
    if (y.size() > 0) hist.row(i) /= static_cast<double>(y.size());
  }
  double total = 0.0;
  int pairs = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      total += 0.5 * (hist.row(i) - hist.row(j)).cwiseAbs().sum();
      ++pairs;
    }
  }
  return pairs > 0 ? total / pairs : 0.0;
}

namespace {

class MultiClientFamily : public ObjectiveFamily {
 public:
  explicit MultiClientFamily(std::shared_ptr<const MultiClientData> data)
      : data_(std::move(data)) {}

  int n_objectives() const override { return data_->n_clients(); }
  int param_dim() const override { return data_->param_dim(); }

  double eval(int i, const Vector& theta, Vector* grad) const override {
    return multinomial_logistic_loss(data_->clients()[i].train,
                                     data_->classes(), theta, grad);
  }

  std::string name() const override { return data_->name(); }
  std::uint64_t seed() const override { return data_->seed(); }

  std::vector<int> sample_counts() const override {
    std::vector<int> counts;
    counts.reserve(data_->n_clients());
    for (const ClientData& c : data_->clients()) {
      counts.push_back(c.train.size());
    }
    return counts;
  }

  std::shared_ptr<const ObjectiveFamily> minibatched(
      double fraction, std::uint64_t seed) const override {
    if (!(fraction > 0.0) || fraction > 1.0) {
      throw std::invalid_argument("minibatched: fraction must be in (0, 1]");
    }
    std::vector<ClientData> subsampled = data_->clients();
    for (std::size_t k = 0; k < subsampled.size(); ++k) {
      const ClientSplit& full = data_->clients()[k].train;
      const int take = std::max(
          1, static_cast<int>(std::ceil(fraction * full.size())));
      if (take >= full.size()) continue;
      std::vector<int> idx(full.size());
      std::iota(idx.begin(), idx.end(), 0);
      Rng rng = make_rng(seed, "minibatch", k);
      std::shuffle(idx.begin(), idx.end(), rng);
      ClientSplit sub;
      sub.x.resize(take, full.x.cols());
      sub.y.resize(take);
      for (int s = 0; s < take; ++s) {
        sub.x.row(s) = full.x.row(idx[s]);
        sub.y[s] = full.y[idx[s]];
      }
      subsampled[k].train = std::move(sub);
    }
    auto view = std::make_shared<MultiClientData>(
        std::move(subsampled), data_->classes(), data_->feature_dim(),
        data_->name(), data_->seed());
    return std::make_shared<MultiClientFamily>(view);
  }

 private:
  std::shared_ptr<const MultiClientData> data_;
};

}  // namespace

Problem make_client_problem(std::shared_ptr<const MultiClientData> data) {
  return Problem(std::make_shared<MultiClientFamily>(std::move(data)));
}

// ---------------------------------------------------------------------------
// Synthetic federated data

void SynthFlSpec::validate() const {
  if (rho1 < 0.0 || rho2 < 0.0) {
    throw std::invalid_argument("SynthFlSpec: rho1 and rho2 must be >= 0");
  }
  if (n_clients < 1) {
    throw std::invalid_argument("SynthFlSpec: need at least one client");
  }
  if (feature_dim < 1 || classes < 2) {
    throw std::invalid_argument("SynthFlSpec: degenerate shape");
  }
  if (min_samples < 5 || max_samples < min_samples) {
    throw std::invalid_argument("SynthFlSpec: bad sample-count range");
  }
}

SynthFlData gen_synthetic_fl(const SynthFlSpec& spec) {
  spec.validate();
  const int d = spec.feature_dim;
  const int c = spec.classes;

  Vector feature_stddev(d);
  for (int k = 0; k < d; ++k) {
    feature_stddev[k] = std::pow(static_cast<double>(k + 1), -0.6);  // sqrt(k^-1.2)
  }

  SynthFlData out;
  std::vector<ClientData> clients(spec.n_clients);
  std::normal_distribution<double> normal01(0.0, 1.0);
  for (int k = 0; k < spec.n_clients; ++k) {
    Rng rng = make_rng(spec.seed, "synth_fl.client", k);
    const double u_k = spec.rho1 * normal01(rng);
    const double b_center = spec.rho2 * normal01(rng);

    Matrix w_true(c, d);
    for (int r = 0; r < c; ++r) {
      for (int q = 0; q < d; ++q) w_true(r, q) = u_k + normal01(rng);
    }
    Vector bias_true(c);
    for (int r = 0; r < c; ++r) bias_true[r] = u_k + normal01(rng);
    Vector feature_mean(d);
    for (int q = 0; q < d; ++q) feature_mean[q] = b_center + normal01(rng);

    std::uniform_real_distribution<double> log_count(
        std::log(static_cast<double>(spec.min_samples)),
        std::log(static_cast<double>(spec.max_samples)));
    int count = static_cast<int>(std::lround(std::exp(log_count(rng))));
    count = std::clamp(count, spec.min_samples, spec.max_samples);

    Matrix x(count, d);
    Eigen::VectorXi y(count);
    for (int s = 0; s < count; ++s) {
      for (int q = 0; q < d; ++q) {
        x(s, q) = feature_mean[q] + feature_stddev[q] * normal01(rng);
      }
      Vector logits = w_true * x.row(s).transpose() + bias_true;
      Eigen::Index label = 0;
      logits.maxCoeff(&label);
      y[s] = static_cast<int>(label);
    }

    const SplitCounts split = split_counts(count);
    ClientData& client = clients[k];
    client.train.x = x.topRows(split.train);
    client.train.y = y.head(split.train);
    client.val.x = x.middleRows(split.train, split.val);
    client.val.y = y.segment(split.train, split.val);
    client.test.x = x.bottomRows(split.test);
    client.test.y = y.tail(split.test);

    out.true_weights.push_back(std::move(w_true));
    out.true_bias.push_back(std::move(bias_true));
  }

  std::ostringstream name;
  name << "synth_fl(" << spec.rho1 << "," << spec.rho2 << ")";
  out.data = std::make_shared<MultiClientData>(std::move(clients), c, d,
                                               name.str(), spec.seed);
  return out;
}

// ---------------------------------------------------------------------------
// Fairness problem

void FairnessSpec::validate() const {
  if (n_samples < 10) {
    throw std::invalid_argument("FairnessSpec: n_samples must be >= 10");
  }
  if (sensitive_correlation < 0.0 || sensitive_correlation > 1.0) {
    throw std::invalid_argument("FairnessSpec: correlation must be in [0, 1]");
  }
}

FairnessData::FairnessData(Matrix x, Eigen::VectorXi y, Vector z,
                           std::uint64_t seed)
    : x_(std::move(x)), y_(std::move(y)), z_(std::move(z)), seed_(seed) {
  if (x_.rows() != y_.size() || x_.rows() != z_.size()) {
    throw std::invalid_argument("FairnessData: inconsistent sample counts");
  }
  const double zbar = z_.mean();
  cov_dir_ = Vector::Zero(x_.cols());
  for (Eigen::Index s = 0; s < x_.rows(); ++s) {
    cov_dir_ += (z_[s] - zbar) * x_.row(s).transpose();
  }
  cov_dir_ /= static_cast<double>(x_.rows());
}

namespace {

class FairnessFamily : public ObjectiveFamily {
 public:
  explicit FairnessFamily(std::shared_ptr<const FairnessData> data)
      : data_(std::move(data)) {}

  int n_objectives() const override { return 2; }
  int param_dim() const override {
    return static_cast<int>(data_->features().cols());
  }

  double eval(int i, const Vector& theta, Vector* grad) const override {
    const Matrix& x = data_->features();
    const Eigen::Index n = x.rows();
    if (i == 0) {
      // Binary logistic loss with labels mapped to +-1.
      double total = 0.0;
      if (grad) grad->setZero(theta.size());
      for (Eigen::Index s = 0; s < n; ++s) {
        const double ys = data_->labels()[s] == 1 ? 1.0 : -1.0;
        const double margin = ys * x.row(s).dot(theta);
        // log(1 + exp(-margin)) without overflow
        total += margin > 0 ? std::log1p(std::exp(-margin))
                            : -margin + std::log1p(std::exp(margin));
        if (grad) {
          const double sig = 1.0 / (1.0 + std::exp(margin));
          *grad -= sig * ys * x.row(s).transpose();
        }
      }
      if (grad) *grad /= static_cast<double>(n);
      return total / static_cast<double>(n);
    }
    // Squared covariance between the sensitive attribute and the score.
    const double cov = theta.dot(data_->covariance_direction());
    if (grad) *grad = 2.0 * cov * data_->covariance_direction();
    return cov * cov;
  }

  std::string name() const override { return "fairness"; }
  std::uint64_t seed() const override { return data_->seed(); }

 private:
  std::shared_ptr<const FairnessData> data_;
};

}  // namespace

Problem FairnessData::make_problem() const {
  return Problem(std::make_shared<FairnessFamily>(
      std::make_shared<const FairnessData>(*this)));
}

FairnessData gen_fairness_problem(const FairnessSpec& spec) {
  spec.validate();
  Rng rng = make_rng(spec.seed, "fairness");
  std::normal_distribution<double> normal01(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  Matrix cov1(2, 2), cov0(2, 2);
  cov1 << 5.0, 1.0, 1.0, 5.0;
  cov0 << 10.0, 1.0, 1.0, 3.0;
  const Matrix chol1 = cov1.llt().matrixL();
  const Matrix chol0 = cov0.llt().matrixL();
  const Eigen::Vector2d mean1(2.0, 2.0), mean0(-2.0, -2.0);

  const int n = spec.n_samples;
  Matrix x(n, 3);
  Eigen::VectorXi y(n);
  Vector z(n);
  for (int s = 0; s < n; ++s) {
    const int label = unif(rng) < 0.5 ? 0 : 1;
    Eigen::Vector2d noise(normal01(rng), normal01(rng));
    Eigen::Vector2d point =
        label == 1 ? mean1 + chol1 * noise : mean0 + chol0 * noise;
    const double p_sensitive =
        0.5 + spec.sensitive_correlation * (label - 0.5);
    y[s] = label;
    z[s] = unif(rng) < p_sensitive ? 1.0 : 0.0;
    x(s, 0) = point[0];
    x(s, 1) = point[1];
    x(s, 2) = 1.0;  // intercept column
  }
  return FairnessData(std::move(x), std::move(y), std::move(z), spec.seed);
}

// ---------------------------------------------------------------------------
// Finite differences

double finite_diff_check(const Problem& problem, const Vector& theta,
                         double eps) {
  if (!(eps > 0.0)) {
    throw std::invalid_argument("finite_diff_check: eps must be > 0");
  }
  double worst = 0.0;
  Vector grad, probe = theta;
  for (int i = 0; i < problem.n_objectives(); ++i) {
    problem.eval(i, theta, &grad);
    Vector fd(theta.size());
    for (Eigen::Index k = 0; k < theta.size(); ++k) {
      probe[k] = theta[k] + eps;
      const double up = problem.eval(i, probe);
      probe[k] = theta[k] - eps;
      const double down = problem.eval(i, probe);
      probe[k] = theta[k];
      fd[k] = (up - down) / (2.0 * eps);
    }
    const double err =
        (grad - fd).cwiseAbs().maxCoeff() / (1.0 + fd.cwiseAbs().maxCoeff());
    worst = std::max(worst, err);
  }
  return worst;
}

// ---------------------------------------------------------------------------
// Dataset text files

namespace {

void write_header(std::ostream& out, int feature_dim, bool sensitive) {
  out << "client";
  for (int k = 0; k < feature_dim; ++k) out << " f" << k;
  out << " label";
  if (sensitive) out << " sensitive";
  out << "\n";
}

void write_row(std::ostream& out, int client, const auto& features, int label,
               const double* sensitive) {
  out << client;
  for (Eigen::Index k = 0; k < features.size(); ++k) {
    out << ' ' << features[k];
  }
  out << ' ' << label;
  if (sensitive) out << ' ' << static_cast<int>(*sensitive);
  out << "\n";
}

}  // namespace

void export_dataset(std::ostream& out, const MultiClientData& data) {
  out.precision(17);
  write_header(out, data.feature_dim(), false);
  for (int k = 0; k < data.n_clients(); ++k) {
    const ClientData& client = data.clients()[k];
    for (const ClientSplit* split : {&client.train, &client.val, &client.test}) {
      for (int s = 0; s < split->size(); ++s) {
        write_row(out, k, split->x.row(s), split->y[s], nullptr);
      }
    }
  }
}

void export_dataset(std::ostream& out, const FairnessData& data) {
  out.precision(17);
  write_header(out, 2, true);
  for (int s = 0; s < data.n_samples(); ++s) {
    const double z = data.sensitive()[s];
    // Only the two raw features; the intercept column is implicit.
    write_row(out, 0, data.features().row(s).head(2), data.labels()[s], &z);
  }
}

std::shared_ptr<const MultiClientData> load_dataset(std::istream& in,
                                                    const std::string& name,
                                                    std::uint64_t seed) {
  std::string header;
  if (!std::getline(in, header)) {
    throw std::runtime_error("load_dataset: empty file");
  }
  std::istringstream hs(header);
  std::vector<std::string> columns;
  for (std::string tok; hs >> tok;) columns.push_back(tok);
  if (columns.size() < 3 || columns.front() != "client") {
    throw std::runtime_error("load_dataset: malformed header");
  }
  bool has_sensitive = columns.back() == "sensitive";
  const int feature_dim =
      static_cast<int>(columns.size()) - 2 - (has_sensitive ? 1 : 0);
  if (feature_dim < 1) {
    throw std::runtime_error("load_dataset: no feature columns");
  }

  std::map<int, std::vector<std::pair<Vector, int>>> by_client;
  int max_label = 0;
  std::string line;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream ls(line);
    int client = 0, label = 0;
    Vector features(feature_dim);
    if (!(ls >> client)) {
      throw std::runtime_error("load_dataset: bad client id at line " +
                               std::to_string(line_no));
    }
    for (int k = 0; k < feature_dim; ++k) {
      if (!(ls >> features[k])) {
        throw std::runtime_error("load_dataset: bad feature at line " +
                                 std::to_string(line_no));
      }
    }
    if (!(ls >> label) || label < 0) {
      throw std::runtime_error("load_dataset: bad label at line " +
                               std::to_string(line_no));
    }
    max_label = std::max(max_label, label);
    by_client[client].emplace_back(std::move(features), label);
  }
  if (by_client.empty()) {
    throw std::runtime_error("load_dataset: no samples");
  }

  std::vector<ClientData> clients;
  clients.reserve(by_client.size());
  for (const auto& [id, rows] : by_client) {
    const int count = static_cast<int>(rows.size());
    Matrix x(count, feature_dim);
    Eigen::VectorXi y(count);
    for (int s = 0; s < count; ++s) {
      x.row(s) = rows[s].first.transpose();
      y[s] = rows[s].second;
    }
    const SplitCounts split = split_counts(count);
    ClientData client;
    client.train.x = x.topRows(split.train);
    client.train.y = y.head(split.train);
    client.val.x = x.middleRows(split.train, split.val);
    client.val.y = y.segment(split.train, split.val);
    client.test.x = x.bottomRows(split.test);
    client.test.y = y.tail(split.test);
    clients.push_back(std::move(client));
  }
  return std::make_shared<MultiClientData>(std::move(clients), max_label + 1,
                                           feature_dim, name, seed);
}

std::shared_ptr<const MultiClientData> load_dataset_file(const std::string& path,
                                                         std::uint64_t seed) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("load_dataset_file: cannot open " + path);
  }
  return load_dataset(in, path, seed);
}

}  // namespace most
