#include "mdag/catalog.hpp"

#include <algorithm>
#include <map>

#include "mdag/dsl.hpp"

namespace mdag::catalog {

MDag Scenario::graph() const { return parse(document); }

namespace {

constexpr VerdictStatus U = VerdictStatus::unbiased;
constexpr VerdictStatus B = VerdictStatus::possibly_biased;

std::vector<Scenario> make_scenarios() {
    std::vector<Scenario> s;

    s.push_back({
        "fig1a",
        R"(dag "fig1a" {
  node X { status: incomplete, role: exposure }
  node Y { status: incomplete, role: outcome }
  X -> Y
  X -> R[Y]
  target: Y ~ X
}
)",
        "Two incomplete variables; the exposure drives the outcome and the outcome's "
        "missingness, missingness in the exposure has no cause.",
        {{"X", "Y"},
         U,
         B,
         false,
         {{{"X"}, U}, {{"Y"}, U}},
         {{"X"}, {"Y"}, {"X", "Y"}}},
        true,
    });

    s.push_back({
        "fig1b",
        R"(dag "fig1b" {
  node X { status: incomplete, role: exposure }
  node Y { status: incomplete, role: outcome }
  X -> Y
  Y -> R[X]
  target: Y ~ X
}
)",
        "Two incomplete variables; the outcome drives missingness in the exposure, so "
        "restriction must be to observed outcome.",
        {{"X", "Y"}, B, B, false, {{{"Y"}, U}, {{"X"}, B}}, {{"Y"}}},
        true,
    });

    s.push_back({
        "fig4",
        R"(dag "fig4" {
  node W { status: incomplete, role: covariate }
  node X { status: incomplete, role: exposure }
  node Y { status: incomplete, role: outcome }
  W -> X
  W -> Y
  X -> Y
  W -> R[X]
  X -> R[W]
  target: Y ~ X + W
}
)",
        "Confounder W and exposure X each cause the other's missingness; outcome "
        "missingness is exogenous.",
        {{"W", "X", "Y"},
         U,
         B,
         false,
         {{{"X"}, U}, {{"W"}, U}, {{"X", "W"}, U}, {{"Y"}, B}},
         {{"W"}, {"X"}, {"W", "X"}, {"W", "Y"}, {"X", "Y"}, {"W", "X", "Y"}}},
        true,
    });

    s.push_back({
        "fig5a",
        R"(dag "fig5a" {
  node W { status: incomplete, role: covariate }
  node X { status: complete, role: exposure }
  node Y { status: incomplete, role: outcome }
  W -> X
  W -> Y
  X -> Y
  W -> R[Y]
  X -> R[Y]
  Y -> R[W]
  X -> R[W]
  target: Y ~ X + W
}
)",
        "Complete exposure; the outcome causes missingness in the confounder, so only "
        "restriction to observed outcome works.",
        {{"W", "Y"}, B, B, false, {{{"Y"}, U}, {{"W"}, B}}, {{"Y"}}},
        true,
    });

    s.push_back({
        "fig5b",
        R"(dag "fig5b" {
  node W { status: incomplete, role: covariate }
  node X { status: complete, role: exposure }
  node Y { status: incomplete, role: outcome }
  node U { status: unmeasured }
  W -> X
  W -> Y
  X -> Y
  U -> Y
  W -> R[Y]
  X -> R[Y]
  X -> R[W]
  U -> R[W]
  target: Y ~ X + W
}
)",
        "As fig5a but with an unmeasured common cause of the outcome and the "
        "confounder's missingness; restricting on the outcome opens a collider path, so "
        "no subsample works.",
        {{"W", "Y"}, B, B, false, {{{"Y"}, B}, {{"W"}, B}}, {}},
        true,
    });

    s.push_back({
        "fig5c",
        R"(dag "fig5c" {
  node W { status: incomplete, role: covariate }
  node X { status: incomplete, role: exposure }
  node Y { status: incomplete, role: outcome }
  W -> X
  W -> Y
  X -> Y
  W -> R[X]
  W -> R[Y]
  Y -> R[W]
  target: Y ~ X + W
}
)",
        "All three analysis variables incomplete; only joint restriction to observed "
        "exposure and outcome is valid.",
        {{"W", "X", "Y"},
         B,
         B,
         false,
         {{{"X", "Y"}, U}, {{"Y"}, B}, {{"W"}, B}},
         {{"X", "Y"}}},
        true,
    });

    s.push_back({
        "figS1",
        R"(dag "figS1" {
  node A { status: incomplete, role: auxiliary }
  node X { status: complete, role: exposure }
  node Y { status: incomplete, role: outcome }
  X -> Y
  A -> Y
  X -> R[Y]
  A -> R[A]
  target: Y ~ X; auxiliary: A
}
)",
        "Incomplete auxiliary that causes its own missingness; every valid restriction "
        "collapses to the complete-records sample.",
        {{"A", "Y"}, U, B, false, {{{"Y"}, U}, {{"A"}, B}}, {{"Y"}}},
        false,
    });

    s.push_back({
        "fig2_motivating",
        R"(dag "fig2_motivating" {
  node SEP { status: incomplete, role: covariate }
  node sex { status: complete, role: covariate }
  node smoking { status: incomplete, role: exposure }
  node IQ15 { status: incomplete, role: outcome }
  node ability { status: unmeasured }
  node eduscore { status: incomplete, role: auxiliary }
  SEP -> smoking
  SEP -> IQ15
  smoking -> IQ15
  sex -> IQ15
  ability -> IQ15
  ability -> eduscore
  SEP -> eduscore
  SEP -> R[smoking]
  SEP -> R[SEP]
  SEP -> R[IQ15]
  SEP -> R[eduscore]
  smoking -> R[smoking]
  smoking -> R[IQ15]
  sex -> R[IQ15]
  target: IQ15 ~ smoking + SEP + sex; auxiliary: eduscore
}
)",
        "Cohort-study example: smoking exposure, IQ outcome, socioeconomic confounders "
        "driving all response indicators, linked education score as auxiliary.",
        {{"IQ15", "SEP", "eduscore", "smoking"},
         U,
         B,
         false,
         {{{"smoking", "SEP"}, U}, {{"SEP"}, B}},
         {{"SEP", "smoking"},
          {"IQ15", "SEP", "smoking"},
          {"SEP", "eduscore", "smoking"},
          {"IQ15", "SEP", "eduscore", "smoking"}}},
        false,
    });

    // Canonical missingness structures (after Moreno-Betancur et al. 2018):
    // shared skeleton Z1 -> {X,Y}, Z2 -> {X,Y}, X -> Y, U -> {Z2,Y}, plus an
    // unmeasured W feeding every response indicator. Panels differ only in
    // which variables drive each indicator.
    auto mb_doc = [](const std::string& id, const std::string& extra_edges) {
        return "dag \"" + id + "\" {\n"
               "  node Z1 { status: complete, role: covariate }\n"
               "  node Z2 { status: incomplete, role: covariate }\n"
               "  node X { status: incomplete, role: exposure }\n"
               "  node Y { status: incomplete, role: outcome }\n"
               "  node U { status: unmeasured }\n"
               "  node W { status: unmeasured }\n"
               "  Z1 -> X\n"
               "  Z1 -> Y\n"
               "  Z2 -> X\n"
               "  Z2 -> Y\n"
               "  X -> Y\n"
               "  U -> Z2\n"
               "  U -> Y\n"
               "  W -> R[X]\n"
               "  W -> R[Y]\n"
               "  W -> R[Z2]\n" +
               extra_edges +
               "  target: Y ~ X + Z1 + Z2\n"
               "}\n";
    };
    const std::vector<std::vector<std::string>> mb_sub_ok = {{"X", "Z2"}, {"X", "Y", "Z2"}};

    s.push_back({"mb_a",
                 mb_doc("mb_a",
                        "  Z1 -> R[Y]\n"
                        "  Z1 -> R[X]\n"
                        "  Z1 -> R[Z2]\n"),
                 "Canonical structure A: all missingness driven by the complete covariate; "
                 "full-sample imputation is valid.",
                 {{},
                  U,
                  U,
                  false,
                  {{{"X", "Z2"}, U}},
                  {{},
                   {"X"},
                   {"Y"},
                   {"Z2"},
                   {"X", "Y"},
                   {"X", "Z2"},
                   {"Y", "Z2"},
                   {"X", "Y", "Z2"}}},
                 false});

    s.push_back({"mb_b",
                 mb_doc("mb_b",
                        "  X -> R[Y]\n"
                        "  Z1 -> R[Y]\n"
                        "  Z2 -> R[Y]\n"
                        "  Z1 -> R[X]\n"
                        "  Z2 -> R[X]\n"
                        "  X -> R[Z2]\n"
                        "  Z1 -> R[Z2]\n"),
                 "Canonical structure B: incomplete covariates drive each other's "
                 "missingness; restrict to observed X and Z2, impute Y.",
                 {{"X", "Y", "Z2"}, U, B, false, {{{"X", "Z2"}, U}, {{"Y"}, B}}, mb_sub_ok},
                 false});

    s.push_back({"mb_c",
                 mb_doc("mb_c",
                        "  X -> R[Y]\n"
                        "  Z1 -> R[Y]\n"
                        "  Z2 -> R[Y]\n"
                        "  Y -> R[X]\n"
                        "  Z1 -> R[X]\n"
                        "  Z2 -> R[X]\n"
                        "  X -> R[Z2]\n"
                        "  Y -> R[Z2]\n"
                        "  Z1 -> R[Z2]\n"),
                 "Canonical structure C: the outcome drives missingness in X and Z2, so no "
                 "partition is valid.",
                 {{"X", "Y", "Z2"}, B, B, false, {{{"Y"}, B}}, {}},
                 false});

    s.push_back({"mb_d",
                 mb_doc("mb_d",
                        "  Z1 -> R[Y]\n"
                        "  X -> R[X]\n"
                        "  Z1 -> R[X]\n"
                        "  Z1 -> R[Z2]\n"
                        "  Z2 -> R[Z2]\n"),
                 "Canonical structure D: X and Z2 each cause their own missingness; "
                 "restrict to observed X and Z2, impute Y.",
                 {{"X", "Y", "Z2"}, U, B, false, {{{"X", "Z2"}, U}, {{"Y"}, B}}, mb_sub_ok},
                 false});

    s.push_back({"mb_e",
                 mb_doc("mb_e",
                        "  Z1 -> R[Y]\n"
                        "  X -> R[Y]\n"
                        "  Z2 -> R[Y]\n"
                        "  X -> R[X]\n"
                        "  Z1 -> R[X]\n"
                        "  Z2 -> R[X]\n"
                        "  X -> R[Z2]\n"
                        "  Z1 -> R[Z2]\n"
                        "  Z2 -> R[Z2]\n"),
                 "Canonical structure E: self-missingness in X and Z2 plus cross effects; "
                 "restrict to observed X and Z2, impute Y.",
                 {{"X", "Y", "Z2"}, U, B, false, {{{"X", "Z2"}, U}, {{"Y"}, B}}, mb_sub_ok},
                 false});

    s.push_back({"mb_f",
                 mb_doc("mb_f",
                        "  Z1 -> R[Y]\n"
                        "  Y -> R[X]\n"
                        "  X -> R[X]\n"
                        "  Z1 -> R[X]\n"
                        "  Y -> R[Z2]\n"
                        "  Z1 -> R[Z2]\n"
                        "  Z2 -> R[Z2]\n"),
                 "Canonical structure F: the outcome drives missingness in X and Z2, so no "
                 "partition is valid.",
                 {{"X", "Y", "Z2"}, B, B, false, {{{"Y"}, B}}, {}},
                 false});

    s.push_back({"mb_g",
                 mb_doc("mb_g",
                        "  Y -> R[Y]\n"
                        "  X -> R[Y]\n"
                        "  Z1 -> R[Y]\n"
                        "  Z2 -> R[Y]\n"
                        "  Z1 -> R[X]\n"
                        "  Z2 -> R[X]\n"
                        "  X -> R[Z2]\n"
                        "  Z1 -> R[Z2]\n"),
                 "Canonical structure G: the outcome causes its own missingness; neither "
                 "full-sample nor subsample imputation is valid.",
                 {{"X", "Y", "Z2"}, B, B, true, {{{"X", "Z2"}, B}}, {}},
                 false});

    s.push_back({"mb_h",
                 mb_doc("mb_h",
                        "  Y -> R[Y]\n"
                        "  X -> R[Y]\n"
                        "  Z1 -> R[Y]\n"
                        "  Z2 -> R[Y]\n"
                        "  Y -> R[X]\n"
                        "  Z1 -> R[X]\n"
                        "  Z2 -> R[X]\n"
                        "  Y -> R[Z2]\n"
                        "  X -> R[Z2]\n"
                        "  Z1 -> R[Z2]\n"),
                 "Canonical structure H: the outcome causes its own missingness and "
                 "everyone else's; nothing is valid.",
                 {{"X", "Y", "Z2"}, B, B, true, {{{"Y"}, B}}, {}},
                 false});

    return s;
}

const std::vector<Scenario>& scenarios() {
    static const std::vector<Scenario> all = make_scenarios();
    return all;
}

}  // namespace

const Scenario& get(const std::string& id) {
    for (const auto& s : scenarios()) {
        if (s.id == id) return s;
    }
    throw GraphError("unknown scenario '" + id + "'");
}

std::vector<std::string> list() {
    std::vector<std::string> ids;
    for (const auto& s : scenarios()) ids.push_back(s.id);
    std::sort(ids.begin(), ids.end());
    return ids;
}

}  // namespace mdag::catalog
