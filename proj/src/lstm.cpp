#include "depdetect/lstm.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "depdetect/error.hpp"
#include "depdetect/rng.hpp"
#include "depdetect/vecmath.hpp"

namespace dd {

namespace {

constexpr double kClipNorm = 5.0;

// y[j] += sum_i x[i] * m[i*cols + j]
void add_vec_mat(std::span<const double> x, std::span<const double> m,
                 std::size_t cols, std::span<double> y) {
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double xi = x[i];
    if (xi == 0.0) continue;
    const double* row = m.data() + i * cols;
    for (std::size_t j = 0; j < cols; ++j) y[j] += xi * row[j];
  }
}

// y[i] += sum_j m[i*cols + j] * g[j]  (gradient through add_vec_mat's x)
void add_mat_vec(std::span<const double> m, std::span<const double> g,
                 std::size_t cols, std::span<double> y) {
  for (std::size_t i = 0; i < y.size(); ++i)
    y[i] += dot({m.data() + i * cols, cols}, g);
}

// m[i*cols + j] += x[i] * g[j]  (outer product)
void add_outer(std::span<const double> x, std::span<const double> g,
               std::size_t cols, std::span<double> m) {
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double xi = x[i];
    if (xi == 0.0) continue;
    double* row = m.data() + i * cols;
    for (std::size_t j = 0; j < cols; ++j) row[j] += xi * g[j];
  }
}

struct StepCache {
  std::uint32_t id = 0;
  std::vector<double> x;      // masked input
  std::vector<double> h_prev_masked;
  std::vector<double> gate_i, gate_f, gate_o, cand;
  std::vector<double> cell, h;
};

double bce_from_logit(double z, double target) {
  // softplus(z) - target*z, stable for large |z|
  const double sp = z > 0.0 ? z + std::log1p(std::exp(-z))
                            : std::log1p(std::exp(z));
  return sp - target * z;
}

// Runs the recurrence over the non-padding ids, filling `caches` when given.
// Returns the readout logit.
double run_forward(const LSTMModel& model, std::span<const std::uint32_t> ids,
                   const LSTMDropoutMasks* masks,
                   std::vector<StepCache>* caches) {
  if (ids.size() != model.max_len)
    fail(Errc::shape, "expected a sequence of length " +
                          std::to_string(model.max_len) + ", got " +
                          std::to_string(ids.size()));
  const std::size_t d = model.dim;
  const std::size_t h = model.hidden;
  std::vector<double> h_state(h, 0.0), c_state(h, 0.0);
  std::vector<double> pre_i(h), pre_f(h), pre_o(h), pre_c(h);

  for (std::uint32_t id : ids) {
    if (id == 0) continue;  // padding carries state through
    if (id > model.vocab)
      fail(Errc::shape, "token id " + std::to_string(id) +
                            " exceeds vocabulary size " +
                            std::to_string(model.vocab));
    StepCache cache;
    cache.id = id;
    cache.x.assign(model.embed.begin() + id * d,
                   model.embed.begin() + (id + 1) * d);
    if (masks)
      for (std::size_t i = 0; i < d; ++i) cache.x[i] *= masks->input[i];
    cache.h_prev_masked = h_state;
    if (masks)
      for (std::size_t i = 0; i < h; ++i)
        cache.h_prev_masked[i] *= masks->recurrent[i];

    pre_i = model.b_i;
    pre_f = model.b_f;
    pre_o = model.b_o;
    pre_c = model.b_c;
    add_vec_mat(cache.x, model.w_i, h, pre_i);
    add_vec_mat(cache.x, model.w_f, h, pre_f);
    add_vec_mat(cache.x, model.w_o, h, pre_o);
    add_vec_mat(cache.x, model.w_c, h, pre_c);
    add_vec_mat(cache.h_prev_masked, model.u_i, h, pre_i);
    add_vec_mat(cache.h_prev_masked, model.u_f, h, pre_f);
    add_vec_mat(cache.h_prev_masked, model.u_o, h, pre_o);
    add_vec_mat(cache.h_prev_masked, model.u_c, h, pre_c);

    cache.gate_i.resize(h);
    cache.gate_f.resize(h);
    cache.gate_o.resize(h);
    cache.cand.resize(h);
    cache.cell.resize(h);
    cache.h.resize(h);
    for (std::size_t j = 0; j < h; ++j) {
      cache.gate_i[j] = sigmoid(pre_i[j]);
      cache.gate_f[j] = sigmoid(pre_f[j]);
      cache.gate_o[j] = sigmoid(pre_o[j]);
      cache.cand[j] = std::tanh(pre_c[j]);
      cache.cell[j] = cache.gate_f[j] * c_state[j] +
                      cache.gate_i[j] * cache.cand[j];
      cache.h[j] = cache.gate_o[j] * std::tanh(cache.cell[j]);
    }
    h_state = cache.h;
    c_state = cache.cell;
    if (caches) caches->push_back(std::move(cache));
  }
  return dot(std::span<const double>{model.w_out}, h_state) + model.b_out;
}

}  // namespace

std::vector<std::uint32_t> encode_sequence(const TokenizedDoc& doc,
                                           const Vocabulary& vocab,
                                           int max_len) {
  if (max_len < 1) fail(Errc::param, "max_len must be at least 1");
  std::vector<std::uint32_t> ids;
  for (const auto& tok : doc.tokens) {
    const std::uint32_t idx = vocab.index_of(tok);
    if (idx != Vocabulary::npos) ids.push_back(idx + 1);
  }
  const auto len = static_cast<std::size_t>(max_len);
  if (ids.size() > len)
    ids.erase(ids.begin(), ids.end() - static_cast<std::ptrdiff_t>(len));
  std::vector<std::uint32_t> out(len - ids.size(), 0);
  out.insert(out.end(), ids.begin(), ids.end());
  return out;
}

std::vector<std::span<double>> LSTMModel::params() {
  return {embed, w_i, w_f, w_o, w_c, u_i, u_f, u_o, u_c,
          b_i,   b_f, b_o, b_c, w_out, {&b_out, 1}};
}

std::vector<std::span<const double>> LSTMModel::params() const {
  return {embed, w_i, w_f, w_o, w_c, u_i, u_f, u_o, u_c,
          b_i,   b_f, b_o, b_c, w_out, {&b_out, 1}};
}

void LSTMGrads::resize_like(const LSTMModel& model) {
  embed.resize(model.embed.size());
  const auto dh = model.dim * model.hidden;
  const auto hh = model.hidden * model.hidden;
  w_i.resize(dh); w_f.resize(dh); w_o.resize(dh); w_c.resize(dh);
  u_i.resize(hh); u_f.resize(hh); u_o.resize(hh); u_c.resize(hh);
  b_i.resize(model.hidden); b_f.resize(model.hidden);
  b_o.resize(model.hidden); b_c.resize(model.hidden);
  w_out.resize(model.hidden);
  zero();
}

void LSTMGrads::zero() {
  for (auto g : params()) std::fill(g.begin(), g.end(), 0.0);
}

std::vector<std::span<double>> LSTMGrads::params() {
  return {embed, w_i, w_f, w_o, w_c, u_i, u_f, u_o, u_c,
          b_i,   b_f, b_o, b_c, w_out, {&b_out, 1}};
}

double LSTMGrads::global_norm() const {
  double sq = b_out * b_out;
  for (const auto* v : {&embed, &w_i, &w_f, &w_o, &w_c, &u_i, &u_f, &u_o,
                        &u_c, &b_i, &b_f, &b_o, &b_c, &w_out})
    for (double g : *v) sq += g * g;
  return std::sqrt(sq);
}

LSTMModel lstm_init(std::size_t vocab, const LSTMConfig& cfg) {
  if (cfg.hidden < 1 || cfg.embed_dim < 1 || cfg.max_len < 1 ||
      cfg.batch < 1 || cfg.epochs < 1)
    fail(Errc::param, "lstm config values out of range");
  if (!(cfg.dropout_in >= 0.0 && cfg.dropout_in < 1.0 &&
        cfg.dropout_rec >= 0.0 && cfg.dropout_rec < 1.0))
    fail(Errc::param, "dropout rates must lie in [0, 1)");

  const auto d = static_cast<std::size_t>(cfg.embed_dim);
  const auto h = static_cast<std::size_t>(cfg.hidden);
  LSTMModel m;
  m.vocab = vocab;
  m.dim = d;
  m.hidden = h;
  m.max_len = static_cast<std::size_t>(cfg.max_len);
  m.embed.resize((vocab + 1) * d);
  m.w_i.resize(d * h); m.w_f.resize(d * h);
  m.w_o.resize(d * h); m.w_c.resize(d * h);
  m.u_i.resize(h * h); m.u_f.resize(h * h);
  m.u_o.resize(h * h); m.u_c.resize(h * h);
  m.b_i.assign(h, 0.0);
  m.b_f.assign(h, 1.0);  // forget-gate bias starts open
  m.b_o.assign(h, 0.0);
  m.b_c.assign(h, 0.0);
  m.w_out.resize(h);
  m.b_out = 0.0;

  Rng rng(mix_seed(cfg.seed, 0x75f4));
  for (auto* v : {&m.embed, &m.w_i, &m.w_f, &m.w_o, &m.w_c, &m.u_i, &m.u_f,
                  &m.u_o, &m.u_c, &m.w_out})
    for (double& x : *v) x = uniform_real(rng, -0.05, 0.05);
  std::fill(m.embed.begin(), m.embed.begin() + static_cast<long>(d), 0.0);
  return m;
}

double lstm_forward(const LSTMModel& model, std::span<const std::uint32_t> ids,
                    const LSTMDropoutMasks* masks) {
  return sigmoid(run_forward(model, ids, masks, nullptr));
}

double lstm_backward(const LSTMModel& model,
                     std::span<const std::uint32_t> ids, double target,
                     const LSTMDropoutMasks* masks, LSTMGrads& grads) {
  const std::size_t d = model.dim;
  const std::size_t h = model.hidden;
  std::vector<StepCache> caches;
  const double z = run_forward(model, ids, masks, &caches);
  const double loss = bce_from_logit(z, target);
  const double dz = sigmoid(z) - target;

  grads.b_out += dz;
  std::vector<double> dh(h, 0.0);
  if (!caches.empty()) {
    axpy(dz, std::span<const double>{caches.back().h},
         std::span<double>{grads.w_out});
    axpy(dz, std::span<const double>{model.w_out}, std::span<double>{dh});
  }

  std::vector<double> dc(h, 0.0);
  std::vector<double> dpre_i(h), dpre_f(h), dpre_o(h), dpre_c(h), dx(d);
  for (std::size_t s = caches.size(); s-- > 0;) {
    const StepCache& cache = caches[s];
    const std::span<const double> c_prev =
        s > 0 ? std::span<const double>{caches[s - 1].cell}
              : std::span<const double>{};
    for (std::size_t j = 0; j < h; ++j) {
      const double tanh_c = std::tanh(cache.cell[j]);
      const double do_ = dh[j] * tanh_c;
      dc[j] += dh[j] * cache.gate_o[j] * (1.0 - tanh_c * tanh_c);
      const double cp = c_prev.empty() ? 0.0 : c_prev[j];
      const double df = dc[j] * cp;
      const double di = dc[j] * cache.cand[j];
      const double dcand = dc[j] * cache.gate_i[j];
      dpre_o[j] = do_ * cache.gate_o[j] * (1.0 - cache.gate_o[j]);
      dpre_f[j] = df * cache.gate_f[j] * (1.0 - cache.gate_f[j]);
      dpre_i[j] = di * cache.gate_i[j] * (1.0 - cache.gate_i[j]);
      dpre_c[j] = dcand * (1.0 - cache.cand[j] * cache.cand[j]);
      dc[j] *= cache.gate_f[j];  // becomes dc_prev
    }

    add_outer(cache.x, dpre_i, h, grads.w_i);
    add_outer(cache.x, dpre_f, h, grads.w_f);
    add_outer(cache.x, dpre_o, h, grads.w_o);
    add_outer(cache.x, dpre_c, h, grads.w_c);
    add_outer(cache.h_prev_masked, dpre_i, h, grads.u_i);
    add_outer(cache.h_prev_masked, dpre_f, h, grads.u_f);
    add_outer(cache.h_prev_masked, dpre_o, h, grads.u_o);
    add_outer(cache.h_prev_masked, dpre_c, h, grads.u_c);
    axpy(1.0, dpre_i, std::span<double>{grads.b_i});
    axpy(1.0, dpre_f, std::span<double>{grads.b_f});
    axpy(1.0, dpre_o, std::span<double>{grads.b_o});
    axpy(1.0, dpre_c, std::span<double>{grads.b_c});

    std::fill(dx.begin(), dx.end(), 0.0);
    add_mat_vec(model.w_i, dpre_i, h, dx);
    add_mat_vec(model.w_f, dpre_f, h, dx);
    add_mat_vec(model.w_o, dpre_o, h, dx);
    add_mat_vec(model.w_c, dpre_c, h, dx);
    {
      double* erow = grads.embed.data() + cache.id * d;
      for (std::size_t i = 0; i < d; ++i)
        erow[i] += masks ? dx[i] * masks->input[i] : dx[i];
    }

    std::fill(dh.begin(), dh.end(), 0.0);
    add_mat_vec(model.u_i, dpre_i, h, dh);
    add_mat_vec(model.u_f, dpre_f, h, dh);
    add_mat_vec(model.u_o, dpre_o, h, dh);
    add_mat_vec(model.u_c, dpre_c, h, dh);
    if (masks)
      for (std::size_t j = 0; j < h; ++j) dh[j] *= masks->recurrent[j];
  }
  return loss;
}

std::vector<double> lstm_train(LSTMModel& model,
                               const std::vector<std::vector<std::uint32_t>>& x,
                               const std::vector<Label>& y,
                               const LSTMConfig& cfg) {
  if (x.size() != y.size() || x.empty())
    fail(Errc::fit, "sequence/label sizes must match and be nonempty");
  std::size_t dep = 0;
  for (Label l : y) dep += l == Label::Depressive;
  if (dep == 0 || dep == y.size())
    fail(Errc::fit, "training data must contain both classes");

  const std::size_t d = model.dim;
  const std::size_t h = model.hidden;
  Rng rng(mix_seed(cfg.seed, 0xbb77));
  std::vector<std::size_t> order(x.size());
  std::iota(order.begin(), order.end(), std::size_t{0});

  LSTMGrads grads;
  grads.resize_like(model);
  LSTMDropoutMasks masks;
  const bool use_dropout = cfg.dropout_in > 0.0 || cfg.dropout_rec > 0.0;

  std::vector<double> epoch_losses;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    shuffle(order, rng);
    double loss_sum = 0.0;
    for (std::size_t start = 0; start < order.size();
         start += static_cast<std::size_t>(cfg.batch)) {
      const std::size_t stop = std::min(
          order.size(), start + static_cast<std::size_t>(cfg.batch));
      grads.zero();
      for (std::size_t k = start; k < stop; ++k) {
        const std::size_t i = order[k];
        const LSTMDropoutMasks* mask_ptr = nullptr;
        if (use_dropout) {
          masks.input.resize(d);
          masks.recurrent.resize(h);
          const double keep_in = 1.0 - cfg.dropout_in;
          const double keep_rec = 1.0 - cfg.dropout_rec;
          for (double& m : masks.input)
            m = uniform_unit(rng) < keep_in ? 1.0 / keep_in : 0.0;
          for (double& m : masks.recurrent)
            m = uniform_unit(rng) < keep_rec ? 1.0 / keep_rec : 0.0;
          mask_ptr = &masks;
        }
        const double target = y[i] == Label::Depressive ? 1.0 : 0.0;
        loss_sum += lstm_backward(model, x[i], target, mask_ptr, grads);
      }
      const double inv_b = 1.0 / static_cast<double>(stop - start);
      for (auto g : grads.params())
        for (double& v : g) v *= inv_b;
      const double norm = grads.global_norm();
      const double clip = norm > kClipNorm ? kClipNorm / norm : 1.0;
      const double step = cfg.lr * clip;
      auto mp = model.params();
      auto gp = grads.params();
      for (std::size_t g = 0; g < mp.size(); ++g)
        axpy(-step, std::span<const double>{gp[g].data(), gp[g].size()},
             mp[g]);
    }
    epoch_losses.push_back(loss_sum / static_cast<double>(order.size()));
  }
  return epoch_losses;
}

std::pair<Label, double> lstm_predict(const LSTMModel& model,
                                      std::span<const std::uint32_t> ids) {
  const double p = lstm_forward(model, ids);
  return {p > 0.5 ? Label::Depressive : Label::NonDepressive, p};
}

}  // namespace dd
