#pragma once

// Annuity factor from repeated multiplication in extended precision. Only
// integer lifetimes.

namespace oracle {

inline long double annuity_payment(long double principal, long double rate, int years) {
  long double growth = 1.0L;
  for (int i = 0; i < years; ++i) growth *= 1.0L + rate;
  return principal * rate * growth / (growth - 1.0L);
}

}  // namespace oracle
