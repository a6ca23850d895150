//! Convergence diagnostics, uniformity tests and rank statistics.

mod chisq;
mod itemsets;
mod rank;

pub use chisq::chi_square_uniformity;
pub use itemsets::{
    arsd, arsd_trace, is_plateau, mine_top_frequent, relative_slope, support, ArsdRow, FrequentItemsetSet, Itemset,
    Side, TraceConfig, TransactionDB,
};
pub use rank::{average_ranks, descending_order, kendall_tau, ndcg, spearman};
