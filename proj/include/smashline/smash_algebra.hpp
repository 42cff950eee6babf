#pragma once

#include <map>
#include <utility>
#include <vector>

#include "smashline/deformation.hpp"

namespace smashline {

// One-slot element of the smash line algebra: a finite expansion
// sum_{k,l} d_{kl} x^k xi^l with xi^N = 0 and the x-degree capped.
// Canonical form: no zero coefficients are stored.
class SmashElement {
 public:
  using Key = std::pair<int, int>;  // (x power k, xi power l)
  using TermMap = std::map<Key, Complex>;

  static constexpr int kDefaultXCap = 16;

  explicit SmashElement(const Deformation& d, int x_cap = kDefaultXCap);

  static SmashElement monomial(const Deformation& d, int k, int l,
                               Complex coeff = Complex{1.0, 0.0},
                               int x_cap = kDefaultXCap);

  const Deformation& deformation() const { return def_; }
  int x_cap() const { return x_cap_; }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  Complex coeff(int k, int l) const;
  void add_term(int k, int l, Complex c);

  SmashElement& operator+=(const SmashElement& rhs);
  SmashElement& operator*=(Complex s);

 private:
  Deformation def_;
  int x_cap_;
  TermMap terms_;
};

SmashElement operator+(SmashElement lhs, const SmashElement& rhs);
SmashElement operator*(SmashElement lhs, Complex s);
SmashElement operator*(Complex s, SmashElement rhs);

// Bilinear product x^k xi^l . x^k' xi^l' = x^{k+k'} xi^{l+l'}; terms with
// l+l' >= N drop (nilpotency), k+k' > x_cap throws XCapOverflow.
SmashElement multiply(const SmashElement& f, const SmashElement& g);
inline SmashElement operator*(const SmashElement& f, const SmashElement& g) {
  return multiply(f, g);
}

// Counit: the coefficient of the constant term.
Complex counit(const SmashElement& f);

// Largest coefficient difference between two elements (union of supports).
double max_coeff_diff(const SmashElement& a, const SmashElement& b);

// ---------------------------------------------------------------------------
// Multi-slot (tensor power) machinery.

// One factor x^{x_pow} xi^{xi_pow} sitting in tensor slot `slot` (0-based).
// A word is a product of such factors read left to right.
struct SlotFactor {
  int slot = 0;
  int x_pow = 0;
  int xi_pow = 0;
};

struct MultiSlotWord {
  Complex prefactor{1.0, 0.0};
  std::vector<SlotFactor> factors;
  int slots = 0;

  bool is_zero() const { return prefactor == Complex{0.0, 0.0}; }
};

// Rewrites a word into canonical order (slots ascending, x before xi inside
// each slot), accumulating the exchange phases
//   x_i x_j = x_j x_i,   xi_i xi_j = q xi_j xi_i,   x_i xi_j = Q xi_j x_i
// for i > j, together with the symmetric mixed rule xi_i x_j = Q x_j xi_i.
// Any slot accumulating xi-power >= N collapses the word to zero.
MultiSlotWord braided_normal_order(const MultiSlotWord& w, double braiding_q,
                                   const Deformation& d);

// Linear combination of canonical multi-slot monomials. Keys are flattened
// power tuples [i_1, j_1, ..., i_n, j_n] (x then xi per slot); canonical form
// stores no zero coefficients.
class MultiSlotExpansion {
 public:
  using Key = std::vector<int>;
  using TermMap = std::map<Key, Complex>;

  explicit MultiSlotExpansion(int slots);

  // The multiplicative unit: a single all-zero power tuple with coefficient 1.
  static MultiSlotExpansion unit(int slots);

  int slots() const { return slots_; }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  void add_term(Key powers, Complex c);
  void add_word(const MultiSlotWord& w);
  Complex coeff(const Key& powers) const;

 private:
  int slots_;
  TermMap terms_;
};

double max_coeff_diff(const MultiSlotExpansion& a, const MultiSlotExpansion& b);

// Termwise concatenation followed by braided normal ordering. Slot x-powers
// beyond x_cap throw XCapOverflow.
MultiSlotExpansion multislot_multiply(const MultiSlotExpansion& u,
                                      const MultiSlotExpansion& v,
                                      double braiding_q, const Deformation& d,
                                      int x_cap = SmashElement::kDefaultXCap);

// n-fold coproduct of the monomial x^k xi^l: the sum over compositions
// i_1+...+i_n = k and j_1+...+j_n = l of
//   multinomial(k; i) * q_multinomial(l; j) * x^{i_1}xi^{j_1} (x) ... (x) x^{i_n}xi^{j_n}.
// Rejects l >= N.
MultiSlotExpansion coproduct_power(int k, int l, int n, const Deformation& d);

// Linear extension of coproduct_power to a general element.
MultiSlotExpansion coproduct(const SmashElement& f, int n);

// Applies the 2-fold coproduct to tensor slot `leg` of every term (n -> n+1
// slots). Together with coproduct_power this expresses coassociativity.
MultiSlotExpansion expand_leg(const MultiSlotExpansion& e, int leg,
                              const Deformation& d);

// Applies the counit to tensor slot `leg`: keeps the terms whose slot powers
// vanish there and removes the slot (n -> n-1, n >= 2).
MultiSlotExpansion counit_leg(const MultiSlotExpansion& e, int leg);

}  // namespace smashline
