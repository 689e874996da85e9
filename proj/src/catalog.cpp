#include <charconv>
#include <optional>
#include <string>

#include "htorsion/errors.hpp"
#include "htorsion/lie_hermitian.hpp"

namespace htorsion {

namespace {

constexpr int kMaxSokc = 6;  // so(6,C) has complex dimension 15

std::optional<int> parse_suffix(std::string_view name, std::string_view prefix) {
  if (!name.starts_with(prefix)) return std::nullopt;
  const std::string_view digits = name.substr(prefix.size());
  int value = 0;
  const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
  if (ec != std::errc{} || ptr != digits.data() + digits.size() || digits.empty()) return std::nullopt;
  return value;
}

void set_antisymmetric(CTensor3& c, int up, int i, int k, Complex v) {
  c(up, i, k) = v;
  c(up, k, i) = -v;
}

// so(k,C) on the basis E_ab = e_a e_b^T - e_b e_a^T (a < b), which is
// orthonormal for <X, Y> = tr(X^T Y) / 2.
StructureConstants sokc(int k) {
  std::vector<Eigen::MatrixXd> basis;
  for (int a = 0; a < k; ++a)
    for (int b = a + 1; b < k; ++b) {
      Eigen::MatrixXd e = Eigen::MatrixXd::Zero(k, k);
      e(a, b) = 1.0;
      e(b, a) = -1.0;
      basis.push_back(e);
    }
  const int n = static_cast<int>(basis.size());
  StructureConstants sc(n);
  for (int i = 0; i < n; ++i)
    for (int l = 0; l < n; ++l) {
      const Eigen::MatrixXd br = basis[i] * basis[l] - basis[l] * basis[i];
      for (int j = 0; j < n; ++j) sc.C(j, i, l) = 0.5 * (basis[j].transpose() * br).trace();
    }
  return sc;
}

}  // namespace

HermitianStructure catalog(std::string_view name) {
  StructureConstants sc;
  if (auto n = parse_suffix(name, "abelian-")) {
    if (*n < 1 || *n > InvariantForm::kMaxDim) throw UnknownCatalogEntry("abelian dimension out of range");
    sc = StructureConstants(*n);
  } else if (name == "so3c") {
    // d phi_1 = phi_2 ^ phi_3 and cyclic
    sc = StructureConstants(3);
    set_antisymmetric(sc.C, 0, 1, 2, -1.0);
    set_antisymmetric(sc.C, 1, 2, 0, -1.0);
    set_antisymmetric(sc.C, 2, 0, 1, -1.0);
  } else if (auto k = parse_suffix(name, "sokc-")) {
    if (*k < 3 || *k > kMaxSokc) throw UnknownCatalogEntry("sokc-K requires 3 <= K <= 6");
    sc = sokc(*k);
  } else if (name == "iwasawa") {
    // d phi_3 = -phi_1 ^ phi_2
    sc = StructureConstants(3);
    set_antisymmetric(sc.C, 2, 0, 1, 1.0);
  } else if (name == "kodaira-thurston") {
    // d phi_2 = -phi_1 ^ conj(phi_1), i.e. D^1_{21} = 1
    sc = StructureConstants(2);
    sc.D(0, 1, 0) = 1.0;
  } else {
    throw UnknownCatalogEntry("unknown catalog entry: " + std::string(name));
  }
  const int n = sc.n;
  return make_structure(std::move(sc), CMat::Identity(n, n));
}

std::vector<std::string> catalog_names() {
  return {"abelian-1", "abelian-2", "abelian-3", "so3c",    "sokc-3",
          "sokc-4",    "iwasawa",   "kodaira-thurston"};
}

std::string catalog_description(std::string_view name) {
  if (name.starts_with("abelian-")) return "abelian Lie algebra C^N (Kahler, T = 0)";
  if (name == "so3c") return "SO(3,C): d phi_1 = phi_2^phi_3, d phi_2 = phi_3^phi_1, d phi_3 = phi_1^phi_2";
  if (name.starts_with("sokc-")) return "SO(K,C) with the orthonormal basis e_a e_b^T - e_b e_a^T";
  if (name == "iwasawa") return "Iwasawa manifold: d phi_3 = -phi_1^phi_2";
  if (name == "kodaira-thurston") return "Kodaira-Thurston surface: d phi_2 = -phi_1^conj(phi_1)";
  throw UnknownCatalogEntry("unknown catalog entry: " + std::string(name));
}

RealLieData kodaira_thurston_real() {
  // h3 + R: [X_1, X_2] = -2 X_4, J X_1 = X_2, J X_3 = X_4
  RealLieData rl(4);
  rl.f(3, 0, 1) = -2.0;
  rl.f(3, 1, 0) = 2.0;
  rl.J(1, 0) = 1.0;
  rl.J(0, 1) = -1.0;
  rl.J(3, 2) = 1.0;
  rl.J(2, 3) = -1.0;
  return rl;
}

}  // namespace htorsion
