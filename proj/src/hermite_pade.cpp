#include "seqguess/hermite_pade.hpp"

#include <algorithm>
#include <set>
#include <string>

namespace seqguess {

namespace {

void validate(const OrderProblem& pr, const ModPrime& field) {
  const std::size_t m = pr.m();
  if (m == 0) throw UsageError("order problem with no streams");
  if (pr.bounds.size() != m) throw UsageError("degree bound vector has wrong length");
  for (int b : pr.bounds) {
    if (b < 1) throw UsageError("degree bounds must be positive");
  }
  for (const auto& s : pr.streams) {
    if (s.size() != pr.sigma) {
      throw UsageError("stream length " + std::to_string(s.size()) + " differs from sigma " +
                       std::to_string(pr.sigma));
    }
    for (Residue v : s) {
      if (v >= field.value()) throw UsageError("stream entry not reduced");
    }
  }
  if (pr.kind == PointKind::Distinct) {
    if (pr.points.size() != pr.sigma) throw UsageError("point schedule has wrong length");
    for (Residue x : pr.points) {
      if (x >= field.value()) throw UsageError("evaluation point not reduced");
    }
    std::set<Residue> seen(pr.points.begin(), pr.points.end());
    if (seen.size() != pr.points.size()) {
      throw BadModulus("evaluation points collide modulo " + std::to_string(field.value()));
    }
  }
}

// Column storage: `cap` degree slots of m components each, followed by the
// residual stream of length sigma.
struct Column {
  std::vector<Residue> buf;
  std::size_t usedSlots = 1;
  int defect = 0;
};

}  // namespace

SigmaBasis sigmaBasis(const OrderProblem& pr, const ModPrime& field, TieBreak tie) {
  validate(pr, field);
  const std::size_t m = pr.m();
  const std::size_t sigma = pr.sigma;
  const int maxBound = *std::max_element(pr.bounds.begin(), pr.bounds.end());
  const std::size_t cap = static_cast<std::size_t>(maxBound) + sigma + 1;
  const std::size_t polyLen = cap * m;
  const bool series = pr.kind == PointKind::Confluent;

  std::vector<Column> cols(m);
  for (std::size_t l = 0; l < m; ++l) {
    Column& c = cols[l];
    c.buf.assign(polyLen + sigma, 0);
    c.buf[l] = 1;
    std::copy(pr.streams[l].begin(), pr.streams[l].end(), c.buf.begin() + polyLen);
    c.defect = pr.bounds[l];
  }

  std::vector<Residue> res(m);
  for (std::size_t j = 0; j < sigma; ++j) {
    std::size_t piv = m;
    for (std::size_t c = 0; c < m; ++c) {
      res[c] = cols[c].buf[polyLen + j];
      if (res[c] == 0) continue;
      if (piv == m) {
        piv = c;
      } else if (cols[c].defect > cols[piv].defect ||
                 (cols[c].defect == cols[piv].defect && tie == TieBreak::LargestIndex)) {
        piv = c;
      }
    }
    if (piv == m) continue;

    Column& P = cols[piv];
    const Residue invPiv = field.inv(res[piv]);
    for (std::size_t c = 0; c < m; ++c) {
      if (c == piv || res[c] == 0) continue;
      Column& C = cols[c];
      const Residue factor = field.neg(field.mul(res[c], invPiv));
      const std::size_t len = P.usedSlots * m;
      mulAddInPlace(std::span<Residue>(C.buf.data(), len),
                    std::span<const Residue>(P.buf.data(), len), factor, field);
      mulAddInPlace(std::span<Residue>(C.buf.data() + polyLen + j, sigma - j),
                    std::span<const Residue>(P.buf.data() + polyLen + j, sigma - j), factor,
                    field);
      C.usedSlots = std::max(C.usedSlots, P.usedSlots);
    }

    if (P.usedSlots >= cap) throw UsageError("sigmaBasis: column capacity exceeded");
    if (series) {
      // p <- x * p; residual series shifts by one.
      std::copy_backward(P.buf.begin(), P.buf.begin() + P.usedSlots * m,
                         P.buf.begin() + (P.usedSlots + 1) * m);
      std::fill(P.buf.begin(), P.buf.begin() + m, 0);
      auto r = P.buf.begin() + polyLen;
      std::copy_backward(r, r + (sigma - 1), r + sigma);
      *r = 0;
    } else {
      // p <- (x - x_j) * p; residual k scales by (x_k - x_j).
      const Residue xj = pr.points[j];
      const Residue negx = field.neg(xj);
      for (std::size_t d = P.usedSlots; d-- > 0;) {
        for (std::size_t l = 0; l < m; ++l) {
          Residue v = P.buf[d * m + l];
          P.buf[(d + 1) * m + l] = field.add(P.buf[(d + 1) * m + l], v);
          P.buf[d * m + l] = field.mul(v, negx);
        }
      }
      for (std::size_t k = j; k < sigma; ++k) {
        P.buf[polyLen + k] = field.mul(P.buf[polyLen + k], field.sub(pr.points[k], xj));
      }
    }
    ++P.usedSlots;
    --P.defect;
  }

  SigmaBasis out;
  out.bounds = pr.bounds;
  for (auto& c : cols) {
    PolyVec v(m);
    for (std::size_t l = 0; l < m; ++l) {
      ModPoly& comp = v[l];
      comp.resize(c.usedSlots);
      for (std::size_t d = 0; d < c.usedSlots; ++d) comp[d] = c.buf[d * m + l];
      trim(comp);
    }
    out.columns.push_back(std::move(v));
    out.defects.push_back(c.defect);
  }
  return out;
}

std::vector<PolyVec> solutionColumns(const SigmaBasis& basis) {
  std::vector<PolyVec> out;
  for (std::size_t r = 0; r < basis.columns.size(); ++r) {
    if (basis.defects[r] >= 1) out.push_back(basis.columns[r]);
  }
  return out;
}

Residue conditionResidual(const OrderProblem& pr, const PolyVec& p, std::size_t j,
                          const ModPrime& field) {
  if (p.size() != pr.m()) throw UsageError("conditionResidual: vector length mismatch");
  if (j >= pr.sigma) throw UsageError("conditionResidual: condition out of range");
  Residue acc = 0;
  for (std::size_t l = 0; l < p.size(); ++l) {
    const ModPoly& comp = p[l];
    if (pr.kind == PointKind::Confluent) {
      // coefficient of x^j in comp * stream_l
      for (std::size_t d = 0; d < comp.size() && d <= j; ++d) {
        acc = field.add(acc, field.mul(comp[d], pr.streams[l][j - d]));
      }
    } else {
      acc = field.add(acc, field.mul(evalPolyAt(comp, pr.points[j], field), pr.streams[l][j]));
    }
  }
  return acc;
}

}  // namespace seqguess
