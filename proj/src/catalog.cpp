#include "meff/catalog.hpp"

#include <string>

#include "meff/error.hpp"

namespace meff {

namespace {

using O = Order;

constexpr const char* kZeroNote = "P_f A phi_0 = A P_f phi_0 = 0";

const std::vector<TermDescriptor> kTerms{
    // table 1: products with (phi_1, phi_1)
    {1, 1, 1, 2, 0, 3, O::log2, 1, 1, "log^2", "enters with -(phi_1,phi_1)"},
    {2, 1, 2, 4, 2, 5, O::log2, 1, 2, "log^2", "enters with -(phi_1,phi_1)"},
    // table 2
    {3, 1, 3, 2, 0, 3, O::log2, 2, 1, "log^2", ""},
    {5, 1, 3, 2, 2, 4, O::log2, 2, 2, "log^2", ""},
    {3, 1, 5, 2, 2, 4, O::log2, 2, 3, "log^2", ""},
    {4, 1, 4, 0, 2, 3, O::sqrt, 2, 4, "+sqrt", ""},
    {6, 1, 4, 2, 2, 4, O::neg_sqrt, 2, 5, "-sqrt", ""},
    {4, 1, 6, 2, 2, 4, O::neg_sqrt, 2, 6, "-sqrt", ""},
    {5, 1, 5, 2, 4, 5, O::sqrt, 2, 7, "+sqrt", ""},
    {6, 1, 6, 4, 2, 5, O::log2, 2, 8, "log^2", "E2"},
    // table 3
    {1, 4, 1, 0, 0, 2, O::log2, 3, 1, "log^2", ""},
    {2, 4, 2, 2, 2, 4, O::log2, 3, 2, "log^2", ""},
    {1, 5, 1, 0, 2, 3, O::log, 3, 3, "log", ""},
    {2, 5, 2, 2, 4, 5, O::log2, 3, 4, "log^2", ""},
    {2, 6, 1, 2, 2, 4, O::log2, 3, 5, "log^2", ""},
    {1, 6, 2, 2, 2, 4, O::log2, 3, 6, "log^2", ""},
    {2, 7, 1, 2, 2, 4, O::log2, 3, 7, "log^2", ""},
    {1, 7, 2, 2, 2, 4, O::log2, 3, 8, "log^2", ""},
    {1, 8, 1, 2, 0, 3, O::log2, 3, 9, "log^2", "E0"},
    {2, 8, 2, 4, 2, 5, O::log2, 3, 10, "log^2", "E3"},
    // table 4
    {4, 2, 1, 0, 2, 3, O::log, 4, 1, "log", ""},
    {6, 2, 1, 2, 2, 4, O::log2, 4, 2, "log^2", ""},
    {3, 2, 2, 2, 2, 4, O::log2, 4, 3, "log^2", ""},
    {5, 2, 2, 2, 4, 5, O::sqrt, 4, 4, "sqrt", ""},
    {3, 3, 1, 2, 0, 3, O::log2, 4, 5, "log^2", ""},
    {5, 3, 1, 2, 2, 4, O::log2, 4, 6, "log^2", ""},
    {4, 3, 2, 2, 2, 4, O::sqrt, 4, 7, "sqrt", ""},
    {6, 3, 2, 4, 2, 5, O::neg_sqrt, 4, 8, "-sqrt", "E1"},
    // table 5
    {7, 1, 1, 0, 0, 2, O::log2, 5, 1, "log^2", ""},
    {9, 1, 1, 2, 0, 3, O::log2, 5, 2, "log^2", ""},
    {11, 1, 1, 0, 2, 3, O::zero, 5, 3, "=0", kZeroNote},
    {13, 1, 1, 2, 2, 4, O::zero, 5, 4, "=0", kZeroNote},
    {15, 1, 1, 2, 2, 4, O::zero, 5, 5, "=0", kZeroNote},
    {8, 1, 2, 2, 2, 4, O::log2, 5, 6, "log^2", ""},
    {10, 1, 2, 2, 2, 4, O::zero, 5, 7, "=0", "integrand odd in momentum"},
    {12, 1, 2, 2, 4, 5, O::log2, 5, 8, "log^2", ""},
    {14, 1, 2, 2, 2, 4, O::log2, 5, 9, "log^2", ""},
    {16, 1, 2, 4, 2, 5, O::neg_lambda2, 5, 10, "-lambda^2", "E4"},
};

const std::vector<DominantTerm> kDominant{
    {0, 3, 9, 2, 0, 3},
    {1, 4, 8, 4, 2, 5},
    {2, 2, 8, 4, 2, 5},
    {3, 3, 10, 4, 2, 5},
    {4, 5, 10, 4, 2, 5},
};

}  // namespace

const char* order_name(Order o) {
    switch (o) {
    case Order::zero: return "zero";
    case Order::log: return "log";
    case Order::log2: return "log^2";
    case Order::sqrt: return "sqrt";
    case Order::neg_sqrt: return "-sqrt";
    case Order::lambda2: return "lambda^2";
    case Order::neg_lambda2: return "-lambda^2";
    }
    return "?";
}

const std::vector<TermDescriptor>& list_terms() { return kTerms; }

const std::vector<DominantTerm>& dominant_terms() { return kDominant; }

const TermDescriptor& table_row(int table, int row) {
    for (const auto& t : kTerms)
        if (t.table == table && t.row == row) return t;
    throw Error(ErrorKind::not_found, "no table row " + std::to_string(table) + "(" + std::to_string(row) + ")");
}

std::optional<TermDescriptor> find_term(int l, int m, int n) {
    for (const auto& t : kTerms)
        if (t.phi_left == l && t.h_mid == m && t.phi_right == n) return t;
    return std::nullopt;
}

Order predicted_order(int l, int m, int n) {
    if (auto t = find_term(l, m, n)) return t->predicted_order;
    throw Error(ErrorKind::not_found, "term (" + std::to_string(l) + "," + std::to_string(m) + "," +
                                          std::to_string(n) + ") is not cataloged");
}

PowerCount power_count(const TermDescriptor& t) {
    const bool collinear = t.predicted_order == Order::sqrt || t.predicted_order == Order::neg_sqrt;
    const bool asym = t.predicted_order == Order::lambda2 || t.predicted_order == Order::neg_lambda2;
    return {Order::log2, collinear, asym};
}

ParitySummary parity_filter() {
    ParitySummary s{76, 0, 0};
    for (const auto& t : kTerms) {
        if (t.sigmaB_count % 2 == 0)
            ++s.survivors;
        else
            ++s.odd_in_catalog;
    }
    return s;
}

double balance(const TermDescriptor& t) { return t.h0inv_count - 0.5 * (t.sigmaB_count + t.pf_count); }

}  // namespace meff
