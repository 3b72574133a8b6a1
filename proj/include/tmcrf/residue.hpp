#pragma once

#include <bitset>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace tmcrf {

/// The twenty standard amino acids in alphabetical one-letter order, plus a
/// sentinel for ambiguity codes and anything else a lenient parse meets.
enum class Residue : std::uint8_t {
    A, C, D, E, F, G, H, I, K, L, M, N, P, Q, R, S, T, V, W, Y,
    Unk,
};

inline constexpr std::size_t kStandardResidueCount = 20;
inline constexpr std::size_t kResidueAlphabetSize = 21;
inline constexpr std::string_view kStandardLetters = "ACDEFGHIKLMNPQRSTVWY";

[[nodiscard]] constexpr bool is_standard(Residue r) noexcept { return r != Residue::Unk; }
[[nodiscard]] constexpr std::size_t index_of(Residue r) noexcept { return static_cast<std::size_t>(r); }

/// Strict lookup: only the twenty upper-case standard letters succeed.
[[nodiscard]] std::optional<Residue> residue_from_letter(char c) noexcept;
/// `X` for the sentinel.
[[nodiscard]] char residue_letter(Residue r) noexcept;

using Sequence = std::vector<Residue>;

[[nodiscard]] std::string sequence_string(std::span<const Residue> seq);

/// Set of residues, indexed by `index_of`.
using ResidueSet = std::bitset<kResidueAlphabetSize>;

/// Builds a set from one-letter codes; unknown letters are ignored.
[[nodiscard]] ResidueSet residue_set(std::string_view letters);
[[nodiscard]] std::string residue_set_letters(const ResidueSet& set);

enum class Label : std::uint8_t { NonHelix = 0, Helix = 1 };

using Labels = std::vector<Label>;

[[nodiscard]] std::string labels_string(std::span<const Label> labels);
/// Returns nothing if any character is outside {'0','1'}.
[[nodiscard]] std::optional<Labels> parse_labels(std::string_view text);

} // namespace tmcrf
