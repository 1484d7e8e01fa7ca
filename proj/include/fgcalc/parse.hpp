#pragma once

#include <map>
#include <string>

#include "fgcalc/scalar.hpp"

namespace fgcalc {

// Values are written re[+imi]: "0.3", "-1e-2", "0.3+0.1i", "0.5i".
Complex parse_complex(const std::string& text);
std::string format_real(double v);
std::string format_complex(const Complex& z);

// "a=0.2,b=0.1" -> {a: 0.2, b: 0.1}
std::map<std::string, Complex> parse_kv(const std::string& text, const std::string& context);
std::string format_kv(const std::map<std::string, Complex>& kv);

}  // namespace fgcalc
