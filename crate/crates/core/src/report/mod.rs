//! Tabular reports behind the command-line tool.

mod commands;
mod table;

pub use commands::{
    cmd_bloch, cmd_certify, cmd_circuits, cmd_optimize, cmd_sweep, edge_angle, CircuitOptions,
    CommandOutput, OptimizeOptions, SweepConfig, Variant,
};
pub use table::{fmt_g17, Cell, Table};
