//! Readership statistics, the country research model, power-law fits and
//! the utility-time report.

mod model;
mod powerlaw;
mod readership;
mod shares;
mod table;
mod utility;

pub use model::{
    bifurcation_report, filter_active_countries, predict_research, predict_scientists,
    usage_power_law, BifurcationCounts, BifurcationReport, CultureConstants, LineSide,
    ACTIVE_USAGE_THRESHOLD, GDP_PER_SCIENTIST,
};
pub use powerlaw::{fit_power_law, PowerLawFit};
pub use readership::{
    country_usage, unique_reads, user_month_stats, CountryUsage, UserMonthStats, YearMonth,
    DEFAULT_HEAVY_THRESHOLD, UNRESOLVED_COUNTRY,
};
pub use shares::{compare_shares, load_shares, parse_shares, ShareComparison, ShareRow};
pub use table::{Format, Table};
pub use utility::{
    access_counts, load_access_counts, load_utility_table, parse_access_counts,
    parse_utility_table, readership_ratio, utility_report, UtilityReport, UtilityRow, UtilityTable,
    NON_ELECTRONIC_READS_BASELINE,
};
