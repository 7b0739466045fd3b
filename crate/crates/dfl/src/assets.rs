//! Built-in defaults for the synthetic case study and the random generator.

pub const FAERS_QUERIES: &str = include_str!("../assets/faers_queries.cfg");
pub const FAERS_RULES: &str = include_str!("../assets/faers_rules.dfl");
pub const FAERS_OBLIGATIONS: &str = include_str!("../assets/faers_obligations.txt");
pub const GEN_CONFIG: &str = include_str!("../assets/gen_config.json");
