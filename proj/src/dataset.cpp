#include "tmcrf/dataset.hpp"

#include "tmcrf/errors.hpp"

#include <fstream>
#include <sstream>

namespace tmcrf {

ProteinRecord::ProteinRecord(std::string id, Sequence sequence, std::optional<Labels> gold)
    : id_(std::move(id))
    , sequence_(std::move(sequence))
    , gold_(std::move(gold))
{
    if (sequence_.empty()) {
        throw Error(ErrorCode::MalformedRecord, "record '" + id_ + "' has an empty sequence");
    }
    if (gold_ && gold_->size() != sequence_.size()) {
        throw Error(ErrorCode::MalformedRecord,
                    "record '" + id_ + "' has " + std::to_string(gold_->size()) + " labels for "
                        + std::to_string(sequence_.size()) + " residues");
    }
}

void Dataset::add(ProteinRecord record)
{
    auto [it, inserted] = by_id_.emplace(record.id(), records_.size());
    if (!inserted) {
        throw Error(ErrorCode::DuplicateId, "duplicate record id '" + record.id() + "'");
    }
    records_.push_back(std::move(record));
}

const ProteinRecord* Dataset::find(std::string_view id) const
{
    auto it = by_id_.find(std::string(id));
    return it == by_id_.end() ? nullptr : &records_[it->second];
}

namespace {

std::vector<std::string_view> split_lines(std::string_view text)
{
    std::vector<std::string_view> lines;
    std::size_t pos = 0;
    while (pos < text.size()) {
        auto nl = text.find('\n', pos);
        auto line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        if (!line.empty() && line.back() == '\r') {
            line.remove_suffix(1);
        }
        lines.push_back(line);
        if (nl == std::string_view::npos) {
            break;
        }
        pos = nl + 1;
    }
    return lines;
}

bool is_blank(std::string_view line)
{
    return line.find_first_not_of(" \t") == std::string_view::npos;
}

std::string_view trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t");
    return s.substr(first, last - first + 1);
}

Sequence parse_sequence(std::string_view line, const std::string& id, ParseMode mode)
{
    Sequence seq;
    seq.reserve(line.size());
    for (std::size_t i = 0; i < line.size(); ++i) {
        if (auto r = residue_from_letter(line[i])) {
            seq.push_back(*r);
        } else if (mode == ParseMode::Lenient) {
            seq.push_back(Residue::Unk);
        } else {
            throw Error(ErrorCode::UnknownResidue,
                        "record '" + id + "' position " + std::to_string(i) + ": '" + std::string(1, line[i]) + "'");
        }
    }
    return seq;
}

} // namespace

Dataset parse_dataset(std::string_view text, ParseMode mode)
{
    Dataset data;
    const auto lines = split_lines(text);
    std::size_t i = 0;
    while (i < lines.size()) {
        if (is_blank(lines[i])) {
            ++i;
            continue;
        }
        if (lines[i].front() != '>') {
            throw Error(ErrorCode::MalformedRecord, "line " + std::to_string(i + 1) + ": expected '>' header");
        }
        std::string id(trim(lines[i].substr(1)));
        if (id.empty()) {
            throw Error(ErrorCode::MalformedRecord, "line " + std::to_string(i + 1) + ": empty record id");
        }
        ++i;
        if (i >= lines.size() || is_blank(lines[i]) || lines[i].front() == '>') {
            throw Error(ErrorCode::MalformedRecord, "record '" + id + "' has no sequence line");
        }
        auto sequence = parse_sequence(trim(lines[i]), id, mode);
        ++i;
        std::optional<Labels> gold;
        if (i < lines.size() && !is_blank(lines[i]) && lines[i].front() != '>') {
            gold = parse_labels(trim(lines[i]));
            if (!gold) {
                throw Error(ErrorCode::MalformedRecord, "record '" + id + "' label line must contain only 0/1");
            }
            ++i;
            if (i < lines.size() && !is_blank(lines[i]) && lines[i].front() != '>') {
                throw Error(ErrorCode::MalformedRecord, "record '" + id + "' has extra lines");
            }
        }
        data.add(ProteinRecord(std::move(id), std::move(sequence), std::move(gold)));
    }
    return data;
}

std::string read_text_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorCode::Io, "cannot open '" + path.string() + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

Dataset read_dataset(const std::filesystem::path& path, ParseMode mode)
{
    return parse_dataset(read_text_file(path), mode);
}

std::string serialize_dataset(const Dataset& data)
{
    std::string out;
    for (const auto& rec : data) {
        out += '>';
        out += rec.id();
        out += '\n';
        out += sequence_string(rec.sequence());
        out += '\n';
        if (rec.gold()) {
            out += labels_string(*rec.gold());
            out += '\n';
        }
    }
    return out;
}

Dataset exclude_by_prefix(const Dataset& data, const std::vector<std::string>& prefixes)
{
    Dataset out;
    for (const auto& rec : data) {
        bool drop = false;
        for (const auto& p : prefixes) {
            if (!p.empty() && rec.id().starts_with(p)) {
                drop = true;
                break;
            }
        }
        if (!drop) {
            out.add(rec);
        }
    }
    return out;
}

std::vector<Segment> segmentize(std::span<const Label> labels)
{
    std::vector<Segment> segs;
    for (std::size_t i = 0; i < labels.size();) {
        if (labels[i] != Label::Helix) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j + 1 < labels.size() && labels[j + 1] == Label::Helix) {
            ++j;
        }
        segs.push_back({i, j});
        i = j + 1;
    }
    return segs;
}

} // namespace tmcrf
