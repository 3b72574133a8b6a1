#pragma once

#include "tmcrf/residue.hpp"

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace tmcrf {

/// One protein: identifier, residues, and (for training or gold data) the
/// per-residue helix labels.
class ProteinRecord {
public:
    /// Throws MalformedRecord when the sequence is empty or the label count
    /// differs from the residue count.
    ProteinRecord(std::string id, Sequence sequence, std::optional<Labels> gold = std::nullopt);

    [[nodiscard]] const std::string& id() const noexcept { return id_; }
    [[nodiscard]] const Sequence& sequence() const noexcept { return sequence_; }
    [[nodiscard]] std::size_t size() const noexcept { return sequence_.size(); }
    [[nodiscard]] bool has_gold() const noexcept { return gold_.has_value(); }
    [[nodiscard]] const std::optional<Labels>& gold() const noexcept { return gold_; }

    friend bool operator==(const ProteinRecord&, const ProteinRecord&) = default;

private:
    std::string id_;
    Sequence sequence_;
    std::optional<Labels> gold_;
};

class Dataset {
public:
    Dataset() = default;

    /// Throws DuplicateId if a record with the same id is already present.
    void add(ProteinRecord record);

    [[nodiscard]] const std::vector<ProteinRecord>& records() const noexcept { return records_; }
    [[nodiscard]] std::size_t size() const noexcept { return records_.size(); }
    [[nodiscard]] bool empty() const noexcept { return records_.empty(); }
    [[nodiscard]] const ProteinRecord* find(std::string_view id) const;

    auto begin() const noexcept { return records_.begin(); }
    auto end() const noexcept { return records_.end(); }

    friend bool operator==(const Dataset& a, const Dataset& b) { return a.records_ == b.records_; }

private:
    std::vector<ProteinRecord> records_;
    std::unordered_map<std::string, std::size_t> by_id_;
};

enum class ParseMode { Strict, Lenient };

/// Reads the block format
///
///     >id
///     SEQUENCE
///     0011...        (optional)
///
/// Blank lines between blocks are ignored. In lenient mode unrecognized
/// residue letters become `Residue::Unk`.
[[nodiscard]] Dataset parse_dataset(std::string_view text, ParseMode mode = ParseMode::Strict);
[[nodiscard]] Dataset read_dataset(const std::filesystem::path& path, ParseMode mode = ParseMode::Strict);
[[nodiscard]] std::string serialize_dataset(const Dataset& data);

/// Records whose id does not start with any of the prefixes.
[[nodiscard]] Dataset exclude_by_prefix(const Dataset& data, const std::vector<std::string>& prefixes);

/// Inclusive residue range.
struct Segment {
    std::size_t start;
    std::size_t end;

    [[nodiscard]] constexpr std::size_t length() const noexcept { return end - start + 1; }
    friend bool operator==(const Segment&, const Segment&) = default;
};

/// Maximal runs of helix labels, left to right.
[[nodiscard]] std::vector<Segment> segmentize(std::span<const Label> labels);

[[nodiscard]] std::string read_text_file(const std::filesystem::path& path);

} // namespace tmcrf
