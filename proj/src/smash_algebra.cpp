#include "smashline/smash_algebra.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "smashline/compositions.hpp"
#include "smashline/qcalculus.hpp"

namespace smashline {

namespace {

double ipow(double base, long long e) {
  double acc = 1.0;
  for (long long i = 0; i < e; ++i) acc *= base;
  return acc;
}

}  // namespace

SmashElement::SmashElement(const Deformation& d, int x_cap)
    : def_(d), x_cap_(x_cap) {
  if (x_cap < 0) throw ValidationError("SmashElement: x_cap must be >= 0");
}

SmashElement SmashElement::monomial(const Deformation& d, int k, int l,
                                    Complex coeff, int x_cap) {
  SmashElement e(d, x_cap);
  e.add_term(k, l, coeff);
  return e;
}

Complex SmashElement::coeff(int k, int l) const {
  auto it = terms_.find({k, l});
  return it == terms_.end() ? Complex{0.0, 0.0} : it->second;
}

void SmashElement::add_term(int k, int l, Complex c) {
  if (k < 0 || l < 0) throw ValidationError("SmashElement: negative power");
  if (l >= def_.order) {
    throw ValidationError("SmashElement: xi-power " + std::to_string(l) +
                          " not representable (xi^" + std::to_string(def_.order) +
                          " = 0)");
  }
  if (k > x_cap_) throw XCapOverflow(k, x_cap_);
  if (c == Complex{0.0, 0.0}) return;
  auto [it, inserted] = terms_.try_emplace({k, l}, c);
  if (!inserted) {
    it->second += c;
    if (it->second == Complex{0.0, 0.0}) terms_.erase(it);
  }
}

SmashElement& SmashElement::operator+=(const SmashElement& rhs) {
  if (!(def_ == rhs.def_) || x_cap_ != rhs.x_cap_) {
    throw ValidationError("SmashElement: mismatched deformation or x_cap");
  }
  for (const auto& [key, c] : rhs.terms_) add_term(key.first, key.second, c);
  return *this;
}

SmashElement& SmashElement::operator*=(Complex s) {
  if (s == Complex{0.0, 0.0}) {
    terms_.clear();
    return *this;
  }
  for (auto& [key, c] : terms_) c *= s;
  return *this;
}

SmashElement operator+(SmashElement lhs, const SmashElement& rhs) {
  lhs += rhs;
  return lhs;
}

SmashElement operator*(SmashElement lhs, Complex s) {
  lhs *= s;
  return lhs;
}

SmashElement operator*(Complex s, SmashElement rhs) {
  rhs *= s;
  return rhs;
}

SmashElement multiply(const SmashElement& f, const SmashElement& g) {
  if (!(f.deformation() == g.deformation()) || f.x_cap() != g.x_cap()) {
    throw ValidationError("multiply: operands must share deformation and x_cap");
  }
  const int n = f.deformation().order;
  SmashElement out(f.deformation(), f.x_cap());
  for (const auto& [fk, fc] : f.terms()) {
    for (const auto& [gk, gc] : g.terms()) {
      const int l = fk.second + gk.second;
      if (l >= n) continue;  // xi^N = 0
      const int k = fk.first + gk.first;
      if (k > f.x_cap()) throw XCapOverflow(k, f.x_cap());
      out.add_term(k, l, fc * gc);
    }
  }
  return out;
}

Complex counit(const SmashElement& f) { return f.coeff(0, 0); }

double max_coeff_diff(const SmashElement& a, const SmashElement& b) {
  double m = 0.0;
  for (const auto& [key, c] : a.terms()) {
    m = std::max(m, std::abs(c - b.coeff(key.first, key.second)));
  }
  for (const auto& [key, c] : b.terms()) {
    m = std::max(m, std::abs(c - a.coeff(key.first, key.second)));
  }
  return m;
}

MultiSlotWord braided_normal_order(const MultiSlotWord& w, double braiding_q,
                                   const Deformation& d) {
  MultiSlotWord out;
  out.slots = w.slots;
  if (w.is_zero()) {
    out.prefactor = {0.0, 0.0};
    return out;
  }

  std::vector<SlotFactor> fs;
  fs.reserve(w.factors.size());
  for (const SlotFactor& f : w.factors) {
    if (f.slot < 0 || f.slot >= w.slots) {
      throw ValidationError("braided_normal_order: slot index out of range");
    }
    if (f.x_pow < 0 || f.xi_pow < 0) {
      throw ValidationError("braided_normal_order: negative power");
    }
    if (f.x_pow == 0 && f.xi_pow == 0) continue;
    fs.push_back(f);
  }

  // Insertion sort by slot; each adjacent swap moves a higher-slot factor
  // right past a lower-slot one and picks up the exchange phases.
  long long q_exp = 0;
  long long braid_exp = 0;
  for (size_t i = 1; i < fs.size(); ++i) {
    size_t j = i;
    while (j > 0 && fs[j].slot < fs[j - 1].slot) {
      const SlotFactor& hi = fs[j - 1];  // higher slot, currently on the left
      const SlotFactor& lo = fs[j];
      q_exp += static_cast<long long>(hi.xi_pow) * lo.xi_pow;
      braid_exp += static_cast<long long>(hi.x_pow) * lo.xi_pow +
                   static_cast<long long>(hi.xi_pow) * lo.x_pow;
      std::swap(fs[j], fs[j - 1]);
      --j;
    }
  }

  // Merge factors sharing a slot; x and xi commute inside one slot.
  out.factors.clear();
  for (const SlotFactor& f : fs) {
    if (!out.factors.empty() && out.factors.back().slot == f.slot) {
      out.factors.back().x_pow += f.x_pow;
      out.factors.back().xi_pow += f.xi_pow;
    } else {
      out.factors.push_back(f);
    }
  }
  for (const SlotFactor& f : out.factors) {
    if (f.xi_pow >= d.order) {  // nilpotency
      out.prefactor = {0.0, 0.0};
      out.factors.clear();
      return out;
    }
  }

  out.prefactor = w.prefactor * d.q_pow(q_exp) * ipow(braiding_q, braid_exp);
  if (out.prefactor == Complex{0.0, 0.0}) out.factors.clear();
  return out;
}

MultiSlotExpansion::MultiSlotExpansion(int slots) : slots_(slots) {
  if (slots < 1) throw ValidationError("MultiSlotExpansion: need >= 1 slot");
}

MultiSlotExpansion MultiSlotExpansion::unit(int slots) {
  MultiSlotExpansion e(slots);
  e.add_term(Key(static_cast<size_t>(2 * slots), 0), Complex{1.0, 0.0});
  return e;
}

void MultiSlotExpansion::add_term(Key powers, Complex c) {
  if (powers.size() != static_cast<size_t>(2 * slots_)) {
    throw ValidationError("MultiSlotExpansion: power tuple has wrong length");
  }
  if (c == Complex{0.0, 0.0}) return;
  auto [it, inserted] = terms_.try_emplace(std::move(powers), c);
  if (!inserted) {
    it->second += c;
    if (it->second == Complex{0.0, 0.0}) terms_.erase(it);
  }
}

void MultiSlotExpansion::add_word(const MultiSlotWord& w) {
  if (w.is_zero()) return;
  if (w.slots != slots_) {
    throw ValidationError("MultiSlotExpansion: word has wrong slot count");
  }
  Key powers(static_cast<size_t>(2 * slots_), 0);
  for (const SlotFactor& f : w.factors) {
    powers[static_cast<size_t>(2 * f.slot)] += f.x_pow;
    powers[static_cast<size_t>(2 * f.slot + 1)] += f.xi_pow;
  }
  add_term(std::move(powers), w.prefactor);
}

Complex MultiSlotExpansion::coeff(const Key& powers) const {
  auto it = terms_.find(powers);
  return it == terms_.end() ? Complex{0.0, 0.0} : it->second;
}

double max_coeff_diff(const MultiSlotExpansion& a, const MultiSlotExpansion& b) {
  double m = 0.0;
  for (const auto& [key, c] : a.terms()) m = std::max(m, std::abs(c - b.coeff(key)));
  for (const auto& [key, c] : b.terms()) m = std::max(m, std::abs(c - a.coeff(key)));
  return m;
}

MultiSlotExpansion multislot_multiply(const MultiSlotExpansion& u,
                                      const MultiSlotExpansion& v,
                                      double braiding_q, const Deformation& d,
                                      int x_cap) {
  if (u.slots() != v.slots()) {
    throw ValidationError("multislot_multiply: slot counts differ");
  }
  const int n = u.slots();
  MultiSlotExpansion out(n);
  MultiSlotWord w;
  w.slots = n;
  for (const auto& [uk, uc] : u.terms()) {
    for (const auto& [vk, vc] : v.terms()) {
      w.prefactor = uc * vc;
      w.factors.clear();
      for (int s = 0; s < n; ++s) {
        const int xp = uk[static_cast<size_t>(2 * s)];
        const int jp = uk[static_cast<size_t>(2 * s + 1)];
        if (xp != 0 || jp != 0) w.factors.push_back({s, xp, jp});
      }
      for (int s = 0; s < n; ++s) {
        const int xp = vk[static_cast<size_t>(2 * s)];
        const int jp = vk[static_cast<size_t>(2 * s + 1)];
        if (xp != 0 || jp != 0) w.factors.push_back({s, xp, jp});
      }
      MultiSlotWord nw = braided_normal_order(w, braiding_q, d);
      if (nw.is_zero()) continue;
      for (const SlotFactor& f : nw.factors) {
        if (f.x_pow > x_cap) throw XCapOverflow(f.x_pow, x_cap);
      }
      out.add_word(nw);
    }
  }
  return out;
}

MultiSlotExpansion coproduct_power(int k, int l, int n, const Deformation& d) {
  if (n < 1) throw ValidationError("coproduct_power: need n >= 1");
  if (k < 0) throw ValidationError("coproduct_power: negative x-power");
  if (l < 0 || l >= d.order) {
    throw ValidationError("coproduct_power: xi-power must satisfy l <= N-1 = " +
                          std::to_string(d.order - 1));
  }
  MultiSlotExpansion out(n);
  std::vector<int> xparts, jparts;
  for_each_composition(k, n, [&](std::span<const int> xs) {
    const double mx = multinomial(k, xs);
    xparts.assign(xs.begin(), xs.end());
    for_each_composition(l, n, [&](std::span<const int> js) {
      const Complex c = mx * q_multinomial(l, js, d);
      MultiSlotExpansion::Key powers(static_cast<size_t>(2 * n), 0);
      for (int s = 0; s < n; ++s) {
        powers[static_cast<size_t>(2 * s)] = xparts[static_cast<size_t>(s)];
        powers[static_cast<size_t>(2 * s + 1)] = js[static_cast<size_t>(s)];
      }
      out.add_term(std::move(powers), c);
    });
  });
  return out;
}

MultiSlotExpansion coproduct(const SmashElement& f, int n) {
  MultiSlotExpansion out(n);
  for (const auto& [key, c] : f.terms()) {
    MultiSlotExpansion mono = coproduct_power(key.first, key.second, n,
                                              f.deformation());
    for (const auto& [pk, pc] : mono.terms()) out.add_term(pk, c * pc);
  }
  return out;
}

MultiSlotExpansion expand_leg(const MultiSlotExpansion& e, int leg,
                              const Deformation& d) {
  if (leg < 0 || leg >= e.slots()) {
    throw ValidationError("expand_leg: leg index out of range");
  }
  const int n = e.slots();
  MultiSlotExpansion out(n + 1);
  for (const auto& [key, c] : e.terms()) {
    const int k = key[static_cast<size_t>(2 * leg)];
    const int l = key[static_cast<size_t>(2 * leg + 1)];
    MultiSlotExpansion local = coproduct_power(k, l, 2, d);
    for (const auto& [lk, lc] : local.terms()) {
      MultiSlotExpansion::Key powers;
      powers.reserve(static_cast<size_t>(2 * (n + 1)));
      powers.insert(powers.end(), key.begin(), key.begin() + 2 * leg);
      powers.insert(powers.end(), lk.begin(), lk.end());
      powers.insert(powers.end(), key.begin() + 2 * (leg + 1), key.end());
      out.add_term(std::move(powers), c * lc);
    }
  }
  return out;
}

MultiSlotExpansion counit_leg(const MultiSlotExpansion& e, int leg) {
  if (leg < 0 || leg >= e.slots()) {
    throw ValidationError("counit_leg: leg index out of range");
  }
  if (e.slots() < 2) {
    throw ValidationError("counit_leg: need at least two slots");
  }
  MultiSlotExpansion out(e.slots() - 1);
  for (const auto& [key, c] : e.terms()) {
    if (key[static_cast<size_t>(2 * leg)] != 0 ||
        key[static_cast<size_t>(2 * leg + 1)] != 0) {
      continue;
    }
    MultiSlotExpansion::Key powers;
    powers.reserve(key.size() - 2);
    powers.insert(powers.end(), key.begin(), key.begin() + 2 * leg);
    powers.insert(powers.end(), key.begin() + 2 * (leg + 1), key.end());
    out.add_term(std::move(powers), c);
  }
  return out;
}

}  // namespace smashline
