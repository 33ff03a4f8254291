#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "sturm/frequency.hpp"

namespace sturm {

// (type, index)_order
struct Letter {
  int type = 1;
  int index = 1;
  int order = 1;
  auto operator<=>(const Letter&) const = default;
};

using BlockLetter = std::vector<Letter>;
// A word of Omega_a, stored as indices into block_alphabet(a).
using BlockWord = std::vector<int>;

// Word of Omega^alpha: a head type followed by n letters (level n).
struct SymbolWord {
  int head = 1;
  std::vector<Letter> letters;
  int level() const { return static_cast<int>(letters.size()); }
  bool operator==(const SymbolWord&) const = default;
};

std::vector<Letter> alphabet(int m);
bool admissible(int t, const Letter& e);
bool admissible(const FrequencySpec& spec, const SymbolWord& w);

struct IncidenceMatrix {
  int n = 0;
  std::vector<std::uint8_t> e;
  int operator()(int i, int j) const { return e[static_cast<std::size_t>(i) * n + j]; }
};

using Mat3 = std::array<std::array<BigInt, 3>, 3>;
using Mat2 = std::array<std::array<BigInt, 2>, 2>;

// Everything derived from the period block a; built once and cached.
struct BlockSystem {
  std::vector<int> a;
  std::vector<BlockLetter> blocks;
  IncidenceMatrix A;
  std::vector<int> head_type;
  std::vector<int> tail_type;
  std::vector<std::vector<int>> succ;

  int size() const { return static_cast<int>(blocks.size()); }
  int index_of(const BlockLetter& b) const;
};

const BlockSystem& block_system(const std::vector<int>& a);

std::vector<BlockLetter> block_alphabet(const std::vector<int>& a);
IncidenceMatrix incidence_matrix(const std::vector<int>& a);

Mat3 hat_matrix(int m);
Mat3 auxiliary_matrix(const std::vector<int>& a);
Mat2 b_matrix(const std::vector<int>& a);
Mat3 mat3_mul(const Mat3& x, const Mat3& y);
Mat3 mat3_pow(const Mat3& x, int e);

struct PerronData {
  double E = 0;         // from B_a
  double E_power = 0;   // Rayleigh quotient of the power iteration on A_a
  std::vector<double> left;
  std::vector<double> right;  // left . right = 1
  int iterations = 0;
};

// Largest eigenvalue of B_a in closed form.
double perron_value(const std::vector<int>& a);
PerronData perron(const std::vector<int>& a);
const PerronData& perron_cached(const std::vector<int>& a);

bool is_admissible(const std::vector<int>& a, const BlockWord& w);
double parry_measure(const std::vector<int>& a, const BlockWord& w);

void enumerate_words(const std::vector<int>& a, int n,
                     const std::function<void(const BlockWord&)>& visit);
std::vector<BlockWord> words(const std::vector<int>& a, int n);
// 1^T A^{n-1} 1, exact
BigInt word_count(const std::vector<int>& a, int n);

SymbolWord iota(const std::vector<int>& a, const BlockWord& w);

std::string to_string(const Letter& e);
std::string to_string(const BlockLetter& b);
std::string to_string(const std::vector<int>& a, const BlockWord& w);
std::string to_string(const SymbolWord& w);
Letter parse_letter(const std::string& s);
BlockWord parse_block_word(const std::vector<int>& a, const std::string& s);
SymbolWord parse_symbol_word(const std::string& s);

}  // namespace sturm
