#include "liouville/harmonics.hpp"

#include <cmath>
#include <memory>
#include <mutex>
#include <unordered_map>

namespace liouville {

namespace {

// The recurrence coefficients depend only on (l, m); recomputing the two
// square roots per element dominates the cost of the evaluation itself, so
// they are built once per l_max and cached.
struct LegendreTables {
  int l_max;
  std::vector<double> diag;   // sqrt((2m+1)/(2m)), m >= 1
  std::vector<double> first;  // sqrt(2m+3)
  std::vector<double> a, b;   // three-term recurrence, packed like the output
  std::vector<double> e;      // derivative coupling, packed like the output
};

const LegendreTables& tables_for(int l_max) {
  static std::mutex mu;
  static std::unordered_map<int, std::unique_ptr<LegendreTables>> cache;
  thread_local const LegendreTables* last = nullptr;
  if (last && last->l_max == l_max) return *last;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[l_max];
  if (!slot) {
    auto t = std::make_unique<LegendreTables>();
    t->l_max = l_max;
    int np = lm_packed_count(l_max);
    t->diag.resize(l_max + 1);
    t->first.resize(l_max + 1);
    t->a.assign(np, 0.0);
    t->b.assign(np, 0.0);
    t->e.assign(np, 0.0);
    for (int m = 0; m <= l_max; ++m) {
      t->diag[m] = m > 0 ? std::sqrt((2.0 * m + 1.0) / (2.0 * m)) : 0.0;
      t->first[m] = std::sqrt(2.0 * m + 3.0);
      int base = lm_packed(l_max, m, m);
      for (int l = m + 2; l <= l_max; ++l) {
        t->a[base + (l - m)] =
            std::sqrt((4.0 * l * l - 1.0) /
                      (static_cast<double>(l) * l - m * m));
        t->b[base + (l - m)] =
            std::sqrt(((l - 1.0) * (l - 1.0) - m * m) /
                      (4.0 * (l - 1.0) * (l - 1.0) - 1.0));
      }
      for (int l = m + 1; l <= l_max; ++l)
        t->e[base + (l - m)] = std::sqrt((2.0 * l + 1.0) / (2.0 * l - 1.0) *
                                         (static_cast<double>(l) * l - m * m));
    }
    slot = std::move(t);
  }
  last = slot.get();
  return *last;
}

}  // namespace

void legendre_all(int l_max, double ct, double st, double* out) {
  const LegendreTables& t = tables_for(l_max);
  const double inv_sqrt4pi = 0.28209479177387814347;  // 1/sqrt(4 pi)
  // Diagonal terms P̄_mm, then upward recurrence in l per m.
  double pmm = inv_sqrt4pi;
  for (int m = 0; m <= l_max; ++m) {
    if (m > 0) pmm *= st * t.diag[m];
    int base = lm_packed(l_max, m, m);
    out[base] = pmm;
    if (m + 1 <= l_max) out[base + 1] = t.first[m] * ct * pmm;
    for (int l = m + 2; l <= l_max; ++l)
      out[base + (l - m)] =
          t.a[base + (l - m)] * (ct * out[base + (l - 1 - m)] -
                                 t.b[base + (l - m)] * out[base + (l - 2 - m)]);
  }
}

void legendre_all_d1(int l_max, double ct, double st, double* p, double* dp) {
  legendre_all(l_max, ct, st, p);
  const LegendreTables& t = tables_for(l_max);
  // d P̄_lm / d theta = (l ct P̄_lm - e_lm P̄_{l-1,m}) / st,
  // e_lm = sqrt((2l+1)/(2l-1) (l^2 - m^2)).
  for (int m = 0; m <= l_max; ++m) {
    int base = lm_packed(l_max, m, m);
    for (int l = m; l <= l_max; ++l) {
      double num = l * ct * p[base + (l - m)];
      if (l > m) num -= t.e[base + (l - m)] * p[base + (l - 1 - m)];
      dp[base + (l - m)] = num / st;
    }
  }
}

double legendre_pl(int l, double x) {
  if (l == 0) return 1.0;
  double pm1 = 1.0, p = x;
  for (int k = 2; k <= l; ++k) {
    double next = ((2.0 * k - 1.0) * x * p - (k - 1.0) * pm1) / k;
    pm1 = p;
    p = next;
  }
  return p;
}

}  // namespace liouville
