#include "tmcrf/residue.hpp"

namespace tmcrf {

std::optional<Residue> residue_from_letter(char c) noexcept
{
    const auto pos = kStandardLetters.find(c);
    if (pos == std::string_view::npos) {
        return std::nullopt;
    }
    return static_cast<Residue>(pos);
}

char residue_letter(Residue r) noexcept
{
    return is_standard(r) ? kStandardLetters[index_of(r)] : 'X';
}

std::string sequence_string(std::span<const Residue> seq)
{
    std::string out;
    out.reserve(seq.size());
    for (auto r : seq) {
        out.push_back(residue_letter(r));
    }
    return out;
}

ResidueSet residue_set(std::string_view letters)
{
    ResidueSet set;
    for (char c : letters) {
        if (auto r = residue_from_letter(c)) {
            set.set(index_of(*r));
        }
    }
    return set;
}

std::string residue_set_letters(const ResidueSet& set)
{
    std::string out;
    for (std::size_t i = 0; i < kStandardResidueCount; ++i) {
        if (set.test(i)) {
            out.push_back(kStandardLetters[i]);
        }
    }
    return out;
}

std::string labels_string(std::span<const Label> labels)
{
    std::string out;
    out.reserve(labels.size());
    for (auto l : labels) {
        out.push_back(l == Label::Helix ? '1' : '0');
    }
    return out;
}

std::optional<Labels> parse_labels(std::string_view text)
{
    Labels out;
    out.reserve(text.size());
    for (char c : text) {
        if (c == '0') {
            out.push_back(Label::NonHelix);
        } else if (c == '1') {
            out.push_back(Label::Helix);
        } else {
            return std::nullopt;
        }
    }
    return out;
}

} // namespace tmcrf
