#pragma once

#include <optional>
#include <string>
#include <vector>

namespace meff {

enum class Order { zero, log, log2, sqrt, neg_sqrt, lambda2, neg_lambda2 };
const char* order_name(Order o);

struct TermDescriptor {
    int phi_left;
    int h_mid;
    int phi_right;
    int sigmaB_count;
    int pf_count;
    int h0inv_count;
    Order predicted_order;
    int table;
    int row;
    const char* printed_order;  // order column as printed, sign included
    const char* note;
};

// The fourth-order dominant family E0..E4 and the table rows they come from.
struct DominantTerm {
    int index;  // k in E_k
    int table;
    int row;
    int sigmaB_count;
    int pf_count;
    int h0inv_count;
};

struct PowerCount {
    Order naive_order;  // log^2 for every cataloged term
    bool collinear;     // photons back to back: sqrt-type violation
    bool asymmetric;    // one momentum much larger than the other: Lambda^2-type violation
};

struct ParitySummary {
    int total_terms;     // 76
    int survivors;       // even sigmaB count
    int odd_in_catalog;  // must be zero
};

// Rows of the five classification tables, in table order.
const std::vector<TermDescriptor>& list_terms();
const std::vector<DominantTerm>& dominant_terms();
const TermDescriptor& table_row(int table, int row);

// Throws not_found for an uncataloged triple.
Order predicted_order(int l, int m, int n);
std::optional<TermDescriptor> find_term(int l, int m, int n);

PowerCount power_count(const TermDescriptor& t);
ParitySummary parity_filter();

// h0inv - (sigmaB + pf)/2 for the row.
double balance(const TermDescriptor& t);
// Stated value of the balance rule.
inline constexpr double stated_balance = 3.0;

}  // namespace meff
