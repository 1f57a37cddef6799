#pragma once

#include "oddcover/treedsl.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace oddcover {

enum class FigureId { PMinus5, NineTimes3, FifteenTimes4, TwentyOneTimes5, TwentyFiveTimes8 };

const std::vector<FigureId>& all_figures();
std::string figure_name(FigureId id);
FigureId parse_figure(const std::string& name);  // UnknownFigure

// The repeated modulus and its multiplicity a figure is built to achieve.
struct FigureTarget {
    Natural k;
    long t;
};
FigureTarget figure_target(FigureId id, const Bindings& bindings);

const std::string& builtin_source(FigureId id);
TreeDoc builtin_doc(FigureId id);

struct FigureBuild {
    CoveringSystem system;
    Expansion expansion;          // before mop-up
    std::vector<Congruence> mop;  // mop-up congruences
};

// Expansion, mop-up and dedupe with every postcondition checked.
FigureBuild build_figure_detailed(FigureId id, const Bindings& bindings, std::optional<Natural> q = std::nullopt);
CoveringSystem build_figure(FigureId id, const Bindings& bindings, std::optional<Natural> q = std::nullopt);

enum class SplitVariant { General, Coprime };
SplitVariant parse_split_variant(const std::string& text);

struct SplitSpec {
    Natural k;
    Natural m;
    SplitVariant variant = SplitVariant::General;
};

struct SplitResult {
    CoveringSystem system;
    long km_multiplicity = 0;
    long bound = 0;  // the largest multiplicity the transform may produce
};

SplitResult split_covering(const CoveringSystem& s, const SplitSpec& spec);

// Covers every integer outside S_j = {j-3, j+3 mod 9} plus the exceptions.
CoveringSystem subset_covering_mod9(long j, const std::vector<Integer>& exceptions);

namespace detail {
const std::vector<std::pair<std::string_view, std::string_view>>& embedded_figures();
}

}  // namespace oddcover
