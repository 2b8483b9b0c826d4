//! Search cost of a library: how many steps its search algorithm needs to
//! locate a component, times the cost of one step.

use crate::error::{check_count, check_positive_duration, Result};
use crate::model::Organization;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchCost {
    pub iterations: u64,
    pub iteration_time_ns: f64,
    pub ts_ns: f64,
}

/// `ceil(log2(n))` for `n >= 1`.
pub(crate) fn ceil_log2(n: u64) -> u64 {
    debug_assert!(n >= 1);
    u64::from(u64::BITS - (n - 1).leading_zeros())
}

/// Worst-case search steps for a library of `component_count` components.
///
/// Halving organizations take `max(1, ceil(log2 N))` steps, a linear scan
/// takes `N`.
pub fn search_iterations(organization: Organization, component_count: u64) -> Result<u64> {
    let n = check_count("component_count", component_count)?;
    Ok(match organization {
        Organization::SortedSequentialList | Organization::BalancedBinaryTree => ceil_log2(n).max(1),
        Organization::UnsortedSequentialList => n,
    })
}

/// The search-time term `T_s` in ns.
pub fn organizedness_time(organization: Organization, component_count: u64, iteration_time: f64) -> Result<SearchCost> {
    let iterations = search_iterations(organization, component_count)?;
    let iteration_time_ns = check_positive_duration("iteration_time", iteration_time)?;
    Ok(SearchCost { iterations, iteration_time_ns, ts_ns: iterations as f64 * iteration_time_ns })
}
