#include "semg/lstm.hpp"

#include <algorithm>
#include <cmath>

#include "semg/errors.hpp"
#include "semg/rng.hpp"

namespace semg {

namespace {

double sigm(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// out = W x + U h + b, for one gate. W is H x L, U is H x H, row-major.
void gate_preactivation(const std::vector<double>& w, const std::vector<double>& u,
                        const std::vector<double>& b, std::span<const double> x,
                        const std::vector<double>& h, int L, int H, double* out) {
  for (int i = 0; i < H; ++i) {
    double z = b[static_cast<std::size_t>(i)];
    const double* wr = w.data() + static_cast<std::size_t>(i) * L;
    for (int j = 0; j < L; ++j) z += wr[j] * x[static_cast<std::size_t>(j)];
    const double* ur = u.data() + static_cast<std::size_t>(i) * H;
    for (int j = 0; j < H; ++j) z += ur[j] * h[static_cast<std::size_t>(j)];
    out[i] = z;
  }
}

struct StepCache {
  std::vector<double> x;  // input_dim
  std::vector<double> h_prev, c_prev;
  std::vector<double> i, f, o, g;  // post-activation gates
  std::vector<double> c, tanh_c, h;
  std::vector<double> probs;  // softmax of logits
};

}  // namespace

void LstmCell::reset_state() {
  std::fill(h.begin(), h.end(), 0.0);
  std::fill(c.begin(), c.end(), 0.0);
}

std::vector<std::vector<double>*> LstmCell::parameter_blocks() {
  return {&w_input_gate, &w_forget_gate, &w_output_gate, &w_candidate,
          &u_input_gate, &u_forget_gate, &u_output_gate, &u_candidate,
          &b_input_gate, &b_forget_gate, &b_output_gate, &b_candidate,
          &w_project,    &b_project};
}

std::vector<const std::vector<double>*> LstmCell::parameter_blocks() const {
  return {&w_input_gate, &w_forget_gate, &w_output_gate, &w_candidate,
          &u_input_gate, &u_forget_gate, &u_output_gate, &u_candidate,
          &b_input_gate, &b_forget_gate, &b_output_gate, &b_candidate,
          &w_project,    &b_project};
}

LstmCell make_lstm_cell(int input_dim, int hidden_dim, std::uint64_t seed) {
  if (input_dim < 1 || hidden_dim < 1) {
    throw ArgumentError("make_lstm_cell: dimensions must be >= 1");
  }
  LstmCell cell;
  cell.input_dim = input_dim;
  cell.hidden_dim = hidden_dim;
  const std::size_t hl = static_cast<std::size_t>(hidden_dim) * input_dim;
  const std::size_t hh = static_cast<std::size_t>(hidden_dim) * hidden_dim;
  for (auto* w : {&cell.w_input_gate, &cell.w_forget_gate, &cell.w_output_gate,
                  &cell.w_candidate}) {
    w->resize(hl);
  }
  for (auto* u : {&cell.u_input_gate, &cell.u_forget_gate, &cell.u_output_gate,
                  &cell.u_candidate}) {
    u->resize(hh);
  }
  for (auto* b : {&cell.b_input_gate, &cell.b_forget_gate, &cell.b_output_gate,
                  &cell.b_candidate}) {
    b->resize(static_cast<std::size_t>(hidden_dim));
  }
  cell.w_project.resize(static_cast<std::size_t>(input_dim) * hidden_dim);
  cell.b_project.resize(static_cast<std::size_t>(input_dim));
  cell.h.assign(static_cast<std::size_t>(hidden_dim), 0.0);
  cell.c.assign(static_cast<std::size_t>(hidden_dim), 0.0);

  rng::Stream stream(rng::derive(seed, {0x6c73746dULL}));
  for (auto* block : cell.parameter_blocks()) {
    for (double& v : *block) v = stream.uniform(-kLstmInitScale, kLstmInitScale);
  }
  return cell;
}

std::vector<double> lstm_step(LstmCell& cell, std::span<const double> input) {
  const int L = cell.input_dim;
  const int H = cell.hidden_dim;
  if (static_cast<int>(input.size()) != L) {
    throw ArgumentError("lstm_step: input length " + std::to_string(input.size()) +
                        " != input_dim " + std::to_string(L));
  }
  std::vector<double> zi(static_cast<std::size_t>(H)), zf(zi), zo(zi), zg(zi);
  gate_preactivation(cell.w_input_gate, cell.u_input_gate, cell.b_input_gate, input,
                     cell.h, L, H, zi.data());
  gate_preactivation(cell.w_forget_gate, cell.u_forget_gate, cell.b_forget_gate, input,
                     cell.h, L, H, zf.data());
  gate_preactivation(cell.w_output_gate, cell.u_output_gate, cell.b_output_gate, input,
                     cell.h, L, H, zo.data());
  gate_preactivation(cell.w_candidate, cell.u_candidate, cell.b_candidate, input,
                     cell.h, L, H, zg.data());
  for (int i = 0; i < H; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    const double ig = sigm(zi[idx]);
    const double fg = sigm(zf[idx]);
    const double og = sigm(zo[idx]);
    const double cand = std::tanh(zg[idx]);
    cell.c[idx] = fg * cell.c[idx] + ig * cand;
    cell.h[idx] = og * std::tanh(cell.c[idx]);
  }
  std::vector<double> logits(static_cast<std::size_t>(L));
  for (int k = 0; k < L; ++k) {
    double z = cell.b_project[static_cast<std::size_t>(k)];
    const double* wr = cell.w_project.data() + static_cast<std::size_t>(k) * H;
    for (int j = 0; j < H; ++j) z += wr[j] * cell.h[static_cast<std::size_t>(j)];
    logits[static_cast<std::size_t>(k)] = z;
  }
  return logits;
}

std::vector<double> softmax(std::span<const double> logits) {
  std::vector<double> p(logits.size());
  double mx = logits[0];
  for (double v : logits) mx = std::max(mx, v);
  double sum = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    p[i] = std::exp(logits[i] - mx);
    sum += p[i];
  }
  for (double& v : p) v /= sum;
  return p;
}

double sequence_loss(const LstmCell& cell, const std::vector<int>& levels,
                     LstmGradients* gradients) {
  const int L = cell.input_dim;
  const int H = cell.hidden_dim;
  if (levels.size() < 2) {
    throw DataError("sequence_loss: series shorter than 2");
  }
  for (int lv : levels) {
    if (lv < 0 || lv >= L) throw ArgumentError("sequence_loss: level outside alphabet");
  }
  const int steps = static_cast<int>(levels.size()) - 1;
  const double inv_steps = 1.0 / static_cast<double>(steps);

  // Forward with caches.
  std::vector<StepCache> caches(static_cast<std::size_t>(steps));
  std::vector<double> h(static_cast<std::size_t>(H), 0.0);
  std::vector<double> c(static_cast<std::size_t>(H), 0.0);
  std::vector<double> zi(static_cast<std::size_t>(H)), zf(zi), zo(zi), zg(zi);
  double loss = 0.0;
  for (int t = 0; t < steps; ++t) {
    auto& cc = caches[static_cast<std::size_t>(t)];
    cc.x.assign(static_cast<std::size_t>(L), 0.0);
    cc.x[static_cast<std::size_t>(levels[static_cast<std::size_t>(t)])] = 1.0;
    cc.h_prev = h;
    cc.c_prev = c;
    gate_preactivation(cell.w_input_gate, cell.u_input_gate, cell.b_input_gate, cc.x, h,
                       L, H, zi.data());
    gate_preactivation(cell.w_forget_gate, cell.u_forget_gate, cell.b_forget_gate, cc.x,
                       h, L, H, zf.data());
    gate_preactivation(cell.w_output_gate, cell.u_output_gate, cell.b_output_gate, cc.x,
                       h, L, H, zo.data());
    gate_preactivation(cell.w_candidate, cell.u_candidate, cell.b_candidate, cc.x, h, L,
                       H, zg.data());
    cc.i.resize(static_cast<std::size_t>(H));
    cc.f.resize(static_cast<std::size_t>(H));
    cc.o.resize(static_cast<std::size_t>(H));
    cc.g.resize(static_cast<std::size_t>(H));
    cc.c.resize(static_cast<std::size_t>(H));
    cc.tanh_c.resize(static_cast<std::size_t>(H));
    cc.h.resize(static_cast<std::size_t>(H));
    for (int i = 0; i < H; ++i) {
      const auto idx = static_cast<std::size_t>(i);
      cc.i[idx] = sigm(zi[idx]);
      cc.f[idx] = sigm(zf[idx]);
      cc.o[idx] = sigm(zo[idx]);
      cc.g[idx] = std::tanh(zg[idx]);
      cc.c[idx] = cc.f[idx] * c[idx] + cc.i[idx] * cc.g[idx];
      cc.tanh_c[idx] = std::tanh(cc.c[idx]);
      cc.h[idx] = cc.o[idx] * cc.tanh_c[idx];
    }
    h = cc.h;
    c = cc.c;

    std::vector<double> logits(static_cast<std::size_t>(L));
    for (int k = 0; k < L; ++k) {
      double z = cell.b_project[static_cast<std::size_t>(k)];
      const double* wr = cell.w_project.data() + static_cast<std::size_t>(k) * H;
      for (int j = 0; j < H; ++j) z += wr[j] * h[static_cast<std::size_t>(j)];
      logits[static_cast<std::size_t>(k)] = z;
    }
    cc.probs = softmax(logits);
    const int target = levels[static_cast<std::size_t>(t) + 1];
    loss -= std::log(std::max(cc.probs[static_cast<std::size_t>(target)], 1e-300));
  }
  loss *= inv_steps;
  if (gradients == nullptr) return loss;

  // Allocate gradient blocks mirroring the parameter blocks.
  auto params = cell.parameter_blocks();
  gradients->blocks.assign(params.size(), {});
  for (std::size_t b = 0; b < params.size(); ++b) {
    gradients->blocks[b].assign(params[b]->size(), 0.0);
  }
  auto& g_wi = gradients->blocks[0];
  auto& g_wf = gradients->blocks[1];
  auto& g_wo = gradients->blocks[2];
  auto& g_wg = gradients->blocks[3];
  auto& g_ui = gradients->blocks[4];
  auto& g_uf = gradients->blocks[5];
  auto& g_uo = gradients->blocks[6];
  auto& g_ug = gradients->blocks[7];
  auto& g_bi = gradients->blocks[8];
  auto& g_bf = gradients->blocks[9];
  auto& g_bo = gradients->blocks[10];
  auto& g_bg = gradients->blocks[11];
  auto& g_wy = gradients->blocks[12];
  auto& g_by = gradients->blocks[13];

  std::vector<double> dh_next(static_cast<std::size_t>(H), 0.0);
  std::vector<double> dc_next(static_cast<std::size_t>(H), 0.0);
  std::vector<double> dzi(static_cast<std::size_t>(H)), dzf(dzi), dzo(dzi), dzg(dzi);
  for (int t = steps - 1; t >= 0; --t) {
    const auto& cc = caches[static_cast<std::size_t>(t)];
    const int target = levels[static_cast<std::size_t>(t) + 1];

    // d loss / d logits = (p - y) / steps
    std::vector<double> dy = cc.probs;
    dy[static_cast<std::size_t>(target)] -= 1.0;
    for (double& v : dy) v *= inv_steps;

    std::vector<double> dh = dh_next;
    for (int k = 0; k < L; ++k) {
      const auto kk = static_cast<std::size_t>(k);
      g_by[kk] += dy[kk];
      double* gw = g_wy.data() + kk * static_cast<std::size_t>(H);
      const double* wy = cell.w_project.data() + kk * static_cast<std::size_t>(H);
      for (int j = 0; j < H; ++j) {
        gw[j] += dy[kk] * cc.h[static_cast<std::size_t>(j)];
        dh[static_cast<std::size_t>(j)] += wy[j] * dy[kk];
      }
    }

    for (int i = 0; i < H; ++i) {
      const auto idx = static_cast<std::size_t>(i);
      const double d_o = dh[idx] * cc.tanh_c[idx];
      const double dc = dh[idx] * cc.o[idx] * (1.0 - cc.tanh_c[idx] * cc.tanh_c[idx]) +
                        dc_next[idx];
      const double d_i = dc * cc.g[idx];
      const double d_f = dc * cc.c_prev[idx];
      const double d_g = dc * cc.i[idx];
      dzi[idx] = d_i * cc.i[idx] * (1.0 - cc.i[idx]);
      dzf[idx] = d_f * cc.f[idx] * (1.0 - cc.f[idx]);
      dzo[idx] = d_o * cc.o[idx] * (1.0 - cc.o[idx]);
      dzg[idx] = d_g * (1.0 - cc.g[idx] * cc.g[idx]);
      dc_next[idx] = dc * cc.f[idx];
    }

    // Parameter gradients; the one-hot input touches a single W column.
    const int xcol = levels[static_cast<std::size_t>(t)];
    for (int i = 0; i < H; ++i) {
      const auto idx = static_cast<std::size_t>(i);
      const std::size_t wrow = idx * static_cast<std::size_t>(L) +
                               static_cast<std::size_t>(xcol);
      g_wi[wrow] += dzi[idx];
      g_wf[wrow] += dzf[idx];
      g_wo[wrow] += dzo[idx];
      g_wg[wrow] += dzg[idx];
      g_bi[idx] += dzi[idx];
      g_bf[idx] += dzf[idx];
      g_bo[idx] += dzo[idx];
      g_bg[idx] += dzg[idx];
      double* gui = g_ui.data() + idx * static_cast<std::size_t>(H);
      double* guf = g_uf.data() + idx * static_cast<std::size_t>(H);
      double* guo = g_uo.data() + idx * static_cast<std::size_t>(H);
      double* gug = g_ug.data() + idx * static_cast<std::size_t>(H);
      for (int j = 0; j < H; ++j) {
        const double hp = cc.h_prev[static_cast<std::size_t>(j)];
        gui[j] += dzi[idx] * hp;
        guf[j] += dzf[idx] * hp;
        guo[j] += dzo[idx] * hp;
        gug[j] += dzg[idx] * hp;
      }
    }

    // dh for the previous step: U^T dz summed over the four gates.
    std::fill(dh_next.begin(), dh_next.end(), 0.0);
    for (int i = 0; i < H; ++i) {
      const auto idx = static_cast<std::size_t>(i);
      const double* ui = cell.u_input_gate.data() + idx * static_cast<std::size_t>(H);
      const double* uf = cell.u_forget_gate.data() + idx * static_cast<std::size_t>(H);
      const double* uo = cell.u_output_gate.data() + idx * static_cast<std::size_t>(H);
      const double* ug = cell.u_candidate.data() + idx * static_cast<std::size_t>(H);
      for (int j = 0; j < H; ++j) {
        dh_next[static_cast<std::size_t>(j)] += ui[j] * dzi[idx] + uf[j] * dzf[idx] +
                                                uo[j] * dzo[idx] + ug[j] * dzg[idx];
      }
    }
  }
  return loss;
}

}  // namespace semg
