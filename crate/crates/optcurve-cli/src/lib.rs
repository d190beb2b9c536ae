//! Support library for the `optcurve` binary: the embedded reference tables,
//! the row-by-row auditor, table rendering, and the append-only result store.

pub mod audit;
pub mod dataset;
pub mod fmt;
pub mod store;
pub mod table;
