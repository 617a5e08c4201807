#pragma once

#include <string>
#include <vector>

// Printed basic degrees and invariants, transliterated: "D{2l}" stands for D_{2l}.
namespace golden {

inline const std::vector<std::string>& basic_degrees() {
  static const std::vector<std::string> t{
      "-(S4 x D{l}) + (S4 x O2)",
      "-(D4^D2 x_Z2 D{2l}) - (D2^D1 x_Z2 D{2l}) - (D4^Z1 x_D4 D{4l}) - (D3 x D{l}) - (D3^Z1 x_D3 D{3l})"
      " + 2(D1 x D{l}) - (Z1 x D{l}) + (Z2^Z1 x_Z2 D{2l}) + (D2^Z1_Z2 x_D2 D{2l}) + (V4^Z1 x_D2 D{2l})"
      " + (D2^D1 x_D1 D{l}) - (Z2^Z1 x_D1 D{l}) + (S4 x O2)",
      "-(S4^V4 x_D3 D{3l}) - (D4 x D{l}) + (V4 x D{l}) - (D4^V4 x_Z2 D{2l}) + 2(D4^V4 x_D1 D{l}) + (S4 x O2)",
      "-(D4^Z4 x_Z2 D{2l}) - (D4^Z1 x_D4 D{4l}) - (D2^D1 x_Z2 D{2l}) + 2(D1^Z1 x_Z2 D{2l}) + (Z2^Z1 x_Z2 D{2l})"
      " - (Z1 x D{l}) - (D3^Z3 x_Z2 D{2l}) - (D3^Z1 x_D3 D{3l}) + (D2^Z1_D1 x_D2 D{2l}) + (D2^Z1_Z2 x_D2 D{2l})"
      " + (V4^Z1 x_D2 D{2l}) - (Z2^Z1 x_D1 D{l}) + (S4 x O2)",
      "-(S4^A4 x_Z2 D{2l}) + (S4 x O2)",
  };
  return t;
}

inline const std::string& omega_01() {
  static const std::string s = "-(S4 x D1)";
  return s;
}

inline const std::string& omega_11() {
  static const std::string s =
      "-(D4^D2 x_Z2 D2) - (D2^D1 x_Z2 D2) - (D4^Z1 x_D4 D4) + (D3 x D1) - (D3^Z1 x_D3 D3) + (D2 x D1)"
      " - (D1 x D1) + (Z2^Z1 x_Z2 D2) + (D2^Z1_Z2 x_D2 D2) + (V4^Z1 x_D2 D2) + (D4^D2 x_D1 D1)"
      " + (D1^Z1 x_D1 D1) - (Z2^Z1 x_D1 D1)";
  return s;
}

inline const std::string& omega_21() {
  static const std::string s =
      "-(S4^V4 x_D3 D3) - (S4 x D2) + (D4^V4 x_Z2 D2) - (Z4^Z2 x_Z2 D2) + 2(D2^D1 x_Z2 D2) - (D1^Z1 x_Z2 D2)"
      " - 2(Z2^Z1 x_Z2 D2) + 2(S4 x D1) - (D4 x D1) - 2(D3 x D1) - (D2 x D1) + (D1 x D1) + (Z1 x D1)"
      " + 2(D4^D2 x_Z2 D2) + 2(D3^Z1 x_D3 D3) - (D4^Z2_Z4 x_D2 D2) - (D2^Z1_D1 x_D2 D2) - (D2^Z1_Z2 x_D2 D2)"
      " - (V4^Z1 x_D2 D2) - (D4^D2 x_D1 D1) + (D4^V4 x_D1 D1) - (D2^D1 x_D1 D1) + 3(Z2^Z1 x_D1 D1)";
  return s;
}

// Red (maximal) classes of the printed invariants.
inline const std::vector<std::vector<std::string>>& maximal_classes() {
  static const std::vector<std::vector<std::string>> m{
      {"(S4 x D1)"},
      {"(D4^D2 x_Z2 D2)", "(D2^D1 x_Z2 D2)", "(D4^Z1 x_D4 D4)", "(D3 x D1)", "(D3^Z1 x_D3 D3)"},
      {"(S4^V4 x_D3 D3)", "(S4 x D2)"},
  };
  return m;
}

inline std::string instantiate(std::string s, int l) {
  for (int k : {4, 3, 2, 1}) {
    const std::string tok = k == 1 ? "D{l}" : "D{" + std::to_string(k) + "l}";
    for (auto p = s.find(tok); p != std::string::npos; p = s.find(tok)) s.replace(p, tok.size(), "D" + std::to_string(k * l));
  }
  return s;
}

}  // namespace golden
