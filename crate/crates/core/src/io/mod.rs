//! Tree tables, configuration files and reports.

mod config;
mod report;
mod table;

pub use config::{parse_f64_list, EvalConfig, OutputFormat};
pub use report::{num, opt, ReportDocument};
pub use table::{
    load_diameters, load_trees, read_diameters, read_trees, save_trees, write_trees, Patches, POLYGON_AREA_TOLERANCE,
    TREE_TABLE_HEADER,
};
