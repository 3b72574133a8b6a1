#include "tmcrf/tables.hpp"

#include <algorithm>

namespace tmcrf {

namespace {

// Alphabetical residue order, see Residue.
constexpr std::array<int, kResidueAlphabetSize> kKyteDoolittleTenths = {
    18,  // A
    25,  // C
    -35, // D
    -35, // E
    28,  // F
    -4,  // G
    -32, // H
    45,  // I
    -39, // K
    38,  // L
    19,  // M
    -35, // N
    -16, // P
    -35, // Q
    -45, // R
    -8,  // S
    -7,  // T
    42,  // V
    -9,  // W
    -13, // Y
    0,   // Unk
};

ResidueClassTables make_standard()
{
    ResidueClassTables t;
    t.property_groups = standard_property_groups();

    const std::array<std::pair<ElectronicClass, std::string_view>, kElectronicClassCount> electronic = {{
        {ElectronicClass::StrongDonor, "ADEP"},
        {ElectronicClass::WeakDonor, "ILV"},
        {ElectronicClass::Neutral, "CGHSWM"},
        {ElectronicClass::WeakAcceptor, "FQTY"},
        {ElectronicClass::StrongAcceptor, "KNR"},
    }};
    for (const auto& [cls, letters] : electronic) {
        for (char c : letters) {
            t.electronic[index_of(*residue_from_letter(c))] = cls;
        }
    }

    const std::array<std::string_view, 18> chemical = {
        "R",              // --C--
        "YFHW",           // =C(aromatic)--
        "LVIT",           // --CH--
        "KNDELCWSIRQFHY", // --CH2--
        "P",              // --CH2(ring)--
        "LVIATM",         // --CH3
        "WFYH",           // =CH(aromatic)--
        "WP",             // --CH(ring)
        "NQ",             // --C=O
        "DE",             // --COO--
        "H",              // =N--
        "R",              // --NH--
        "NRQ",            // --NH2
        "R",              // =NH2+
        "K",              // --NH3+
        "STY",            // --OH
        "C",              // --SH
        "PHW",            // --NH(ring)--
    };
    for (std::size_t g = 0; g < chemical.size(); ++g) {
        t.chemical_groups.push_back({std::to_string(g + 1), residue_set(chemical[g])});
    }
    return t;
}

} // namespace

int kd_tenths(Residue r) noexcept { return kKyteDoolittleTenths[index_of(r)]; }

double kd_value(Residue r) noexcept { return kd_tenths(r) / 10.0; }

int kd_sum_tenths(std::span<const Residue> seq, std::size_t first, std::size_t last)
{
    int sum = 0;
    for (std::size_t k = first; k <= last; ++k) {
        sum += kd_tenths(seq[k]);
    }
    return sum;
}

double window_mean_kd(std::span<const Residue> seq, std::size_t i, std::size_t w)
{
    const auto half = w / 2;
    const auto first = i >= half ? i - half : 0;
    const auto last = std::min(seq.size() - 1, i + half);
    const auto count = static_cast<double>(last - first + 1);
    return kd_sum_tenths(seq, first, last) / 10.0 / count;
}

std::string_view electronic_name(ElectronicClass c) noexcept
{
    switch (c) {
    case ElectronicClass::StrongDonor: return "StrongDonor";
    case ElectronicClass::WeakDonor: return "WeakDonor";
    case ElectronicClass::Neutral: return "Neutral";
    case ElectronicClass::WeakAcceptor: return "WeakAcceptor";
    case ElectronicClass::StrongAcceptor: return "StrongAcceptor";
    }
    return "";
}

const std::vector<NamedResidueSet>& standard_property_groups()
{
    static const std::vector<NamedResidueSet> groups = {
        {"Aromatic", residue_set("FWYH")},
        {"Hydrophobic", residue_set("MILVAGFWYHKC")},
        {"Positive", residue_set("HKR")},
        {"Polar", residue_set("WYCHKREDSQNT")},
        {"Charged", residue_set("HKRED")},
        {"Negative", residue_set("ED")},
        {"Aliphatic", residue_set("ILV")},
        {"Small", residue_set("VAGCPSDTN")},
        {"Tiny", residue_set("AGS")},
    };
    return groups;
}

const ResidueClassTables& ResidueClassTables::standard()
{
    static const ResidueClassTables tables = make_standard();
    return tables;
}

Classification classify(Residue r, const ResidueClassTables& tables)
{
    Classification out;
    if (!is_standard(r)) {
        return out;
    }
    for (const auto& g : tables.property_groups) {
        if (g.members.test(index_of(r))) {
            out.properties.push_back(g.name);
        }
    }
    out.electronic = tables.electronic[index_of(r)];
    for (std::size_t g = 0; g < tables.chemical_groups.size(); ++g) {
        if (tables.chemical_groups[g].members.test(index_of(r))) {
            out.chemical_groups.push_back(static_cast<int>(g + 1));
        }
    }
    return out;
}

} // namespace tmcrf
