#include "qgs/assembly.hpp"

#include <sstream>
#include <vector>

#include "qgs/errors.hpp"

namespace qgs {

namespace {

constexpr double kRcondPoleThreshold = 1e-13;

/// Channel slots of one vertex: external first, then internal half-edges
/// with this tail, both in canonical (hence contiguous) slot order.
struct VertexChannels {
  std::vector<int> ext;       // external slots
  std::vector<int> internal;  // internal slots
};

std::vector<VertexChannels> collect_channels(const GraphSpec& spec,
                                             const ModeOrdering& ordering) {
  std::vector<VertexChannels> ch(spec.vertices + 1);
  for (int slot = 0; slot < ordering.d_ext; ++slot) {
    const auto& e = spec.external[ordering.slot_to_external[slot]];
    ch[e.a].ext.push_back(slot);
  }
  for (int slot = 0; slot < ordering.d_int; ++slot) {
    ch[edge_tail(spec, ordering.slot_to_half[slot])].internal.push_back(slot);
  }
  return ch;
}

} // namespace

double TotalSMatrix::unitarity_residual() const {
  const CMatrix r = s.adjoint() * s - CMatrix::Identity(s.rows(), s.cols());
  return r.size() == 0 ? 0.0 : r.cwiseAbs().maxCoeff();
}

PropagationMatrix build_propagation(const GraphSpec& spec, const ModeOrdering& ordering,
                                    Complex k) {
  PropagationMatrix out;
  out.k = k;
  out.e = CMatrix::Zero(ordering.d_int, ordering.d_int);
  const Complex mi(0.0, -1.0);
  for (std::size_t i = 0; i < spec.internal.size(); ++i) {
    const auto& e = spec.internal[i];
    const int f = ordering.internal_slot[i][0];
    const int r = ordering.internal_slot[i][1];
    const Complex phase = std::exp(mi * k * e.length);
    // Couples each directed half-edge to its reverse; for loops this is the
    // 2x2 antidiagonal block over the edge's two slots.
    out.e(f, r) = phase * std::exp(Complex(0.0, e.theta));
    out.e(r, f) = phase * std::exp(Complex(0.0, -e.theta));
  }
  return out;
}

BlockMatrices build_blocks(const GraphSpec& spec, const ModeOrdering& ordering, double k) {
  BlockMatrices b;
  b.k = k;
  b.oo = CMatrix::Zero(ordering.d_ext, ordering.d_ext);
  b.oi = CMatrix::Zero(ordering.d_ext, ordering.d_int);
  b.io = CMatrix::Zero(ordering.d_int, ordering.d_ext);
  b.ii = CMatrix::Zero(ordering.d_int, ordering.d_int);

  const auto channels = collect_channels(spec, ordering);
  for (int v = 1; v <= spec.vertices; ++v) {
    const auto& ch = channels[v];
    const int ne = static_cast<int>(ch.ext.size());
    const int ni = static_cast<int>(ch.internal.size());
    const CMatrix s = local_s(spec.local.at(v), k);
    if (s.rows() != ne + ni) {
      std::ostringstream msg;
      msg << "local matrix dimension mismatch at vertex " << v;
      throw GraphError(msg.str());
    }
    for (int i = 0; i < ne; ++i) {
      for (int j = 0; j < ne; ++j) {
        b.oo(ch.ext[i], ch.ext[j]) = s(i, j);
      }
      for (int j = 0; j < ni; ++j) {
        b.oi(ch.ext[i], ch.internal[j]) = s(i, ne + j);
        b.io(ch.internal[j], ch.ext[i]) = s(ne + j, i);
      }
    }
    for (int i = 0; i < ni; ++i) {
      for (int j = 0; j < ni; ++j) {
        b.ii(ch.internal[i], ch.internal[j]) = s(ne + i, ne + j);
      }
    }
  }
  return b;
}

namespace {

Eigen::PartialPivLU<CMatrix> pole_guarded_lu(const CMatrix& m, double k) {
  Eigen::PartialPivLU<CMatrix> lu(m);
  const double rcond = lu.rcond();
  if (!(rcond >= kRcondPoleThreshold)) {
    std::ostringstream msg;
    msg << "scattering pole at k=" << k << " (rcond=" << rcond << ")";
    throw PoleError(msg.str(), k, rcond);
  }
  return lu;
}

} // namespace

TotalSMatrix total_s(const GraphSpec& spec, const ModeOrdering& ordering, double k) {
  const BlockMatrices b = build_blocks(spec, ordering, k);
  TotalSMatrix out;
  out.k = k;
  out.thetas.reserve(spec.internal.size());
  for (const auto& e : spec.internal) {
    out.thetas.push_back(e.theta);
  }
  if (ordering.d_int == 0) {
    out.s = b.oo;
    return out;
  }
  const CMatrix e = build_propagation(spec, ordering, Complex(k, 0.0)).e;
  const auto lu = pole_guarded_lu(e - b.ii, k);
  out.s = b.oo + b.oi * lu.solve(b.io);
  return out;
}

TotalSMatrix total_s(const GraphSpec& spec, double k) {
  return total_s(spec, canonical_ordering(spec), k);
}

CVector internal_modes(const GraphSpec& spec, const ModeOrdering& ordering, double k,
                       const CVector& incoming) {
  if (incoming.size() != ordering.d_ext) {
    throw GraphError("incoming amplitude vector has wrong dimension");
  }
  if (ordering.d_int == 0) {
    return CVector::Zero(0);
  }
  const BlockMatrices b = build_blocks(spec, ordering, k);
  const CMatrix e = build_propagation(spec, ordering, Complex(k, 0.0)).e;
  const auto lu = pole_guarded_lu(e - b.ii, k);
  return lu.solve(b.io * incoming);
}

} // namespace qgs
