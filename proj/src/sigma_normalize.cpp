#include "seqguess/sigma_normalize.hpp"

#include <algorithm>

namespace seqguess {

int defect(const PolyVec& p, const std::vector<int>& bounds) {
  if (p.size() != bounds.size()) throw UsageError("defect: vector and bounds differ in length");
  int best = kInfiniteDefect;
  for (std::size_t i = 0; i < p.size(); ++i) {
    int d = degree(p[i]);
    if (d < 0) continue;
    best = std::min(best, bounds[i] - d);
  }
  if (best == kInfiniteDefect) throw UsageError("defect of the zero vector");
  return best;
}

std::size_t criticalIndex(const PolyVec& p, const std::vector<int>& bounds) {
  const int d = defect(p, bounds);
  for (std::size_t i = 0; i < p.size(); ++i) {
    int deg = degree(p[i]);
    if (deg >= 0 && bounds[i] - deg == d) return i;
  }
  throw UsageError("criticalIndex: inconsistent vector");
}

namespace {

struct Item {
  PolyVec v;
  int d = 0;
  std::size_t crit = 0;
};

// q <- q - c * x^shift * p
void subtractShifted(PolyVec& q, const PolyVec& p, Residue c, std::size_t shift,
                     const ModPrime& field) {
  const Residue neg = field.neg(c);
  for (std::size_t l = 0; l < q.size(); ++l) {
    const ModPoly& src = p[l];
    if (src.empty()) continue;
    ModPoly& dst = q[l];
    if (dst.size() < src.size() + shift) dst.resize(src.size() + shift, 0);
    mulAddInPlace(std::span<Residue>(dst.data() + shift, src.size()), src, neg, field);
    trim(dst);
  }
}

void scale(PolyVec& q, Residue c, const ModPrime& field) {
  for (auto& comp : q) {
    for (auto& x : comp) x = field.mul(x, c);
  }
}

Residue coeffAt(const ModPoly& a, int k) {
  if (k < 0 || static_cast<std::size_t>(k) >= a.size()) return 0;
  return a[k];
}

// Reduces q against the already normalised, higher-defect sequence s0.
void reduceAgainst(PolyVec& q, const std::vector<Item>& s0, const std::vector<int>& n,
                   const ModPrime& field) {
  constexpr int kNone = kInfiniteDefect;
  for (std::size_t guard = 0;; ++guard) {
    if (guard > 1000000) throw UsageError("normalizeBasis: reduction does not terminate");
    int cmin = kNone;
    for (const Item& p : s0) {
      const std::size_t i = p.crit;
      int dq = degree(q[i]);
      int ci = dq < 0 ? kNone : n[i] - dq;
      if (ci <= p.d) cmin = std::min(cmin, ci);
    }
    if (cmin == kNone) return;
    const Item* pick = nullptr;
    for (const Item& p : s0) {
      int dq = degree(q[p.crit]);
      if (dq >= 0 && n[p.crit] - dq == cmin && cmin <= p.d) {
        pick = &p;
        break;
      }
    }
    const std::size_t i0 = pick->crit;
    const int dq = degree(q[i0]);
    const int dp = degree(pick->v[i0]);
    // pick is monic at i0
    subtractShifted(q, pick->v, q[i0][dq], static_cast<std::size_t>(dq - dp), field);
  }
}

}  // namespace

SigmaBasis normalizeBasis(const SigmaBasis& basis, const ModPrime& field) {
  const std::vector<int>& n = basis.bounds;
  const std::size_t m = n.size();
  std::vector<Item> items;
  items.reserve(basis.columns.size());
  for (const auto& col : basis.columns) {
    if (col.size() != m) throw UsageError("normalizeBasis: column length mismatch");
    Item it;
    it.v = col;
    for (auto& c : it.v) trim(c);
    it.d = defect(it.v, n);
    it.crit = criticalIndex(it.v, n);
    items.push_back(std::move(it));
  }
  std::stable_sort(items.begin(), items.end(), [](const Item& a, const Item& b) {
    if (a.d != b.d) return a.d > b.d;
    return a.crit < b.crit;
  });

  std::vector<Item> s0;
  for (std::size_t start = 0; start < items.size();) {
    std::size_t end = start;
    while (end < items.size() && items[end].d == items[start].d) ++end;
    const int d = items[start].d;
    std::vector<Item> cls(items.begin() + start, items.begin() + end);
    for (Item& q : cls) reduceAgainst(q.v, s0, n, field);

    // Leading coefficient vectors of one defect class are independent; bring
    // them to reduced echelon form with constant row operations.
    std::vector<bool> done(cls.size(), false);
    std::vector<Item> ordered;
    for (std::size_t round = 0; round < cls.size(); ++round) {
      std::size_t best = cls.size(), bestPos = m;
      for (std::size_t r = 0; r < cls.size(); ++r) {
        if (done[r]) continue;
        for (std::size_t i = 0; i < m; ++i) {
          if (coeffAt(cls[r].v[i], n[i] - d) != 0) {
            if (i < bestPos) {
              bestPos = i;
              best = r;
            }
            break;
          }
        }
      }
      if (best == cls.size()) throw UsageError("normalizeBasis: input is not a sigma-basis");
      Item& piv = cls[best];
      const int k = n[bestPos] - d;
      scale(piv.v, field.inv(coeffAt(piv.v[bestPos], k)), field);
      for (std::size_t r = 0; r < cls.size(); ++r) {
        if (r == best) continue;
        Residue c = coeffAt(cls[r].v[bestPos], k);
        if (c != 0) subtractShifted(cls[r].v, piv.v, c, 0, field);
      }
      piv.crit = bestPos;
      done[best] = true;
    }
    std::sort(cls.begin(), cls.end(),
              [](const Item& a, const Item& b) { return a.crit < b.crit; });
    for (Item& it : cls) {
      if (defect(it.v, n) != d || criticalIndex(it.v, n) != it.crit) {
        throw UsageError("normalizeBasis: input is not a sigma-basis");
      }
      s0.push_back(std::move(it));
    }
    start = end;
  }

  SigmaBasis out;
  out.bounds = n;
  for (Item& it : s0) {
    out.defects.push_back(it.d);
    out.columns.push_back(std::move(it.v));
  }
  return out;
}

ReductionRecord reductionRecord(const SigmaBasis& normalized) {
  ReductionRecord r;
  for (std::size_t k = 0; k < normalized.columns.size(); ++k) {
    const auto& col = normalized.columns[k];
    std::size_t c = criticalIndex(col, normalized.bounds);
    r.defects.push_back(normalized.defects[k]);
    r.criticalIndices.push_back(c);
    r.leadingExponents.push_back(degree(col[c]));
  }
  return r;
}

Comparison compareReductions(const ReductionRecord& fresh, const ReductionRecord& old) {
  const std::size_t k = fresh.defects.size();
  if (old.defects.size() != k || fresh.criticalIndices.size() != k ||
      old.criticalIndices.size() != k || fresh.leadingExponents.size() != k ||
      old.leadingExponents.size() != k) {
    throw UsageError("compareReductions: records of different shape");
  }
  if (fresh == old) return Comparison::Equal;
  bool le = true, ge = true;
  for (std::size_t r = 0; r < k; ++r) {
    const int a = fresh.defects[r], b = old.defects[r];
    if (a < b) {
      ge = false;
    } else if (a > b) {
      le = false;
    } else {
      if (fresh.criticalIndices[r] < old.criticalIndices[r]) ge = false;
      if (fresh.criticalIndices[r] > old.criticalIndices[r]) le = false;
    }
  }
  if (le && !ge) return Comparison::Better;
  if (ge && !le) return Comparison::Worse;
  return Comparison::Incompatible;
}

}  // namespace seqguess
