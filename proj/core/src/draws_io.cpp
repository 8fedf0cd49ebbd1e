#include "skewvar/draws_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iomanip>

#include "skewvar/errors.hpp"

namespace skewvar {

static_assert(std::endian::native == std::endian::little, "draw files assume a little-endian host");

namespace {

constexpr char kMagic[8] = {'S', 'K', 'V', 'D', 'R', 'A', 'W', '\0'};

class Writer {
 public:
  explicit Writer(std::ostream& out) : out_(out) {}
  template <class T>
  void pod(T v) {
    out_.write(reinterpret_cast<const char*>(&v), sizeof(T));
  }
  void doubles(const double* p, std::size_t n) {
    out_.write(reinterpret_cast<const char*>(p), static_cast<std::streamsize>(n * sizeof(double)));
  }
  void vec(const Eigen::VectorXd& v) { doubles(v.data(), static_cast<std::size_t>(v.size())); }
  void mat(const Eigen::MatrixXd& m) { doubles(m.data(), static_cast<std::size_t>(m.size())); }

 private:
  std::ostream& out_;
};

class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}
  template <class T>
  T pod() {
    T v{};
    read(reinterpret_cast<char*>(&v), sizeof(T));
    return v;
  }
  Eigen::VectorXd vec(Eigen::Index n) {
    Eigen::VectorXd v(n);
    read(reinterpret_cast<char*>(v.data()), static_cast<std::size_t>(n) * sizeof(double));
    return v;
  }
  Eigen::MatrixXd mat(Eigen::Index r, Eigen::Index c) {
    Eigen::MatrixXd m(r, c);
    read(reinterpret_cast<char*>(m.data()), static_cast<std::size_t>(r * c) * sizeof(double));
    return m;
  }

 private:
  void read(char* p, std::size_t n) {
    in_.read(p, static_cast<std::streamsize>(n));
    if (static_cast<std::size_t>(in_.gcount()) != n) throw DataError("draw file is truncated");
  }
  std::istream& in_;
};

int xi_cols(const ModelSpec& spec) { return has_mixing(spec.family) ? spec.n_xi_cols() : spec.k; }

}  // namespace

void save_draws(std::ostream& out, const PosteriorFile& file) {
  const ChainOutput& post = file.posterior;
  const ModelSpec& spec = post.spec;
  const PriorSpec& pr = file.prior;
  Writer w(out);
  out.write(kMagic, sizeof(kMagic));
  w.pod<std::uint32_t>(kDrawFormatVersion);
  w.pod<std::uint8_t>(static_cast<std::uint8_t>(spec.family));
  w.pod<std::uint8_t>(spec.sv ? 1 : 0);
  w.pod<std::uint32_t>(static_cast<std::uint32_t>(spec.p));
  w.pod<std::uint32_t>(static_cast<std::uint32_t>(spec.k));
  w.pod<std::uint64_t>(file.seed);
  w.pod<std::uint64_t>(post.draws.size());
  w.pod<std::uint64_t>(static_cast<std::uint64_t>(file.T));

  w.vec(pr.b0);
  w.vec(pr.vb0);
  for (double v : {pr.l1, pr.l2, pr.va, pr.nu_shape, pr.nu_rate, pr.vgamma, pr.vsigma}) w.pod(v);
  w.vec(pr.h0_mean);
  w.pod(pr.h0_var);

  const bool has_summary = post.summary.logh_mean.rows() == file.T && file.T > 0;
  const bool has_full = !post.latents.empty();
  w.pod<std::uint8_t>((has_summary ? 1 : 0) | (has_full ? 2 : 0));

  const AcceptanceSummary& acc = post.acceptance;
  for (double v : {acc.B, acc.gamma, acc.a, acc.h, acc.sigma2, acc.nu, acc.xi}) w.pod(v);
  if (acc.nu_log_step.size() == spec.n_nu()) {
    w.vec(acc.nu_log_step);
  } else {
    w.vec(Eigen::VectorXd::Zero(spec.n_nu()));
  }

  for (const auto& d : post.draws) {
    w.mat(d.B);
    w.vec(d.a);
    w.vec(d.gamma);
    w.vec(d.nu);
    w.vec(d.sigma2);
    w.vec(d.h0);
  }
  w.mat(post.last_logh);
  if (has_summary) {
    w.mat(post.summary.xi_mean);
    w.mat(post.summary.logh_mean);
    w.mat(post.summary.h_mean);
  }
  if (has_full) {
    if (post.latents.size() != post.draws.size()) {
      throw ConfigError("latent paths must accompany every draw");
    }
    for (const auto& l : post.latents) {
      w.mat(l.xi);
      w.mat(l.logh);
    }
  }
  if (!out) throw DataError("failed writing draw file");
}

void save_draws(const std::string& path, const PosteriorFile& file) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write '" + path + "'");
  save_draws(out, file);
}

PosteriorFile load_draws(std::istream& in, const std::optional<ModelSpec>& expected) {
  char magic[8];
  in.read(magic, sizeof(magic));
  if (in.gcount() != sizeof(magic) || std::memcmp(magic, kMagic, sizeof(magic)) != 0) {
    throw DataError("not a draw file (bad magic)");
  }
  Reader r(in);
  const auto version = r.pod<std::uint32_t>();
  if (version != kDrawFormatVersion) {
    throw DataError("draw file version " + std::to_string(version) + ", expected " +
                    std::to_string(kDrawFormatVersion));
  }
  PosteriorFile file;
  ModelSpec& spec = file.posterior.spec;
  const auto fam = r.pod<std::uint8_t>();
  if (fam > static_cast<std::uint8_t>(Family::MST)) throw DataError("draw file: unknown family");
  spec.family = static_cast<Family>(fam);
  spec.sv = r.pod<std::uint8_t>() != 0;
  spec.p = static_cast<int>(r.pod<std::uint32_t>());
  spec.k = static_cast<int>(r.pod<std::uint32_t>());
  try {
    spec.validate();
  } catch (const ConfigError& e) {
    throw DataError(std::string("draw file: ") + e.what());
  }
  if (expected && !(*expected == spec)) {
    throw ConfigError("draw file holds " + spec.label() + " (p=" + std::to_string(spec.p) +
                      ", k=" + std::to_string(spec.k) + "), which does not match the requested model");
  }
  file.seed = r.pod<std::uint64_t>();
  const auto n_draws = r.pod<std::uint64_t>();
  file.T = static_cast<int>(r.pod<std::uint64_t>());
  const int k = spec.k;
  const int m = spec.n_coef();
  if (n_draws > (1ULL << 32) || file.T < 0) throw DataError("draw file: implausible sizes");

  PriorSpec& pr = file.prior;
  pr.b0 = r.vec(k * m);
  pr.vb0 = r.vec(k * m);
  for (double* v : {&pr.l1, &pr.l2, &pr.va, &pr.nu_shape, &pr.nu_rate, &pr.vgamma, &pr.vsigma}) {
    *v = r.pod<double>();
  }
  pr.h0_mean = r.vec(k);
  pr.h0_var = r.pod<double>();
  const auto flags = r.pod<std::uint8_t>();

  AcceptanceSummary& acc = file.posterior.acceptance;
  for (double* v : {&acc.B, &acc.gamma, &acc.a, &acc.h, &acc.sigma2, &acc.nu, &acc.xi}) {
    *v = r.pod<double>();
  }
  acc.nu_log_step = r.vec(spec.n_nu());

  auto& draws = file.posterior.draws;
  draws.reserve(n_draws);
  for (std::uint64_t j = 0; j < n_draws; ++j) {
    ParameterDraw d;
    d.B = r.mat(k, m);
    d.a = r.vec(spec.n_a());
    d.gamma = r.vec(k);
    d.nu = r.vec(spec.n_nu());
    d.sigma2 = r.vec(k);
    d.h0 = r.vec(k);
    draws.push_back(std::move(d));
  }
  file.posterior.last_logh = r.mat(static_cast<Eigen::Index>(n_draws), k);
  const int T = file.T;
  const int nx = xi_cols(spec);
  if (flags & 1) {
    file.posterior.summary.xi_mean = r.mat(T, nx);
    file.posterior.summary.logh_mean = r.mat(T, k);
    file.posterior.summary.h_mean = r.mat(T, k);
  }
  if (flags & 2) {
    for (std::uint64_t j = 0; j < n_draws; ++j) {
      LatentPaths l;
      l.xi = r.mat(T, nx);
      l.logh = r.mat(T, k);
      file.posterior.latents.push_back(std::move(l));
    }
  }
  return file;
}

PosteriorFile load_draws(const std::string& path, const std::optional<ModelSpec>& expected) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open draw file '" + path + "'");
  return load_draws(in, expected);
}

void export_draws_csv(const PosteriorFile& file, std::ostream& out) {
  const ModelSpec& spec = file.posterior.spec;
  const int k = spec.k;
  const int m = spec.n_coef();
  std::vector<std::string> cols;
  for (int j = 0; j < m; ++j) {
    for (int i = 0; i < k; ++i) cols.push_back("B_" + std::to_string(i + 1) + "_" + std::to_string(j));
  }
  for (int j = 0; j < spec.n_a(); ++j) cols.push_back("a_" + std::to_string(j + 1));
  for (int i = 0; i < k; ++i) cols.push_back("gamma_" + std::to_string(i + 1));
  for (int i = 0; i < spec.n_nu(); ++i) cols.push_back("nu_" + std::to_string(i + 1));
  for (int i = 0; i < k; ++i) cols.push_back("sigma2_" + std::to_string(i + 1));
  for (int i = 0; i < k; ++i) cols.push_back("h0_" + std::to_string(i + 1));
  for (std::size_t c = 0; c < cols.size(); ++c) out << (c ? "," : "") << cols[c];
  out << '\n' << std::setprecision(17);
  for (const auto& d : file.posterior.draws) {
    bool first = true;
    auto emit = [&](const double* p, Eigen::Index n) {
      for (Eigen::Index i = 0; i < n; ++i) {
        out << (first ? "" : ",") << p[i];
        first = false;
      }
    };
    emit(d.B.data(), d.B.size());
    emit(d.a.data(), d.a.size());
    emit(d.gamma.data(), d.gamma.size());
    emit(d.nu.data(), d.nu.size());
    emit(d.sigma2.data(), d.sigma2.size());
    emit(d.h0.data(), d.h0.size());
    out << '\n';
  }
}

}  // namespace skewvar
