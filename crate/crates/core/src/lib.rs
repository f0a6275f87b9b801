//! Crossmaps: validated weighted graphs for moving categorical data between
//! taxonomies.
//!
//! A crosswalk only says which code in one classification corresponds to
//! which code in another. A crossmap adds a weight to every link, the share
//! of the source category's value that flows to the target category, so it
//! can describe one-to-many splits as well as renames and aggregations.
//!
//! The crate is organised around that structure:
//!
//! * [`crossmap`] builds and validates [`Crossmap`] values and classifies
//!   their nodes.
//! * [`transform`] applies crossmaps to [`IndexedSeries`] data, composes and
//!   inverts them, and harmonises several sources into one panel.
//! * [`io`] reads and writes the CSV and JSON interchange formats.
//! * [`viz`] lays crossmaps out in columns and renders SVG and DOT.
//! * [`cli`] is the batch command-line front end.
//!
//! ```
//! use crossmap::{build_crossmap, transform, IndexedSeries};
//!
//! let map = build_crossmap(
//!     "old",
//!     "new",
//!     [("BLX", "BEL", 0.5), ("BLX", "LUX", 0.5), ("AUS", "AUS", 1.0)],
//! )?;
//! let data = IndexedSeries::new("old", [("BLX", 10.0), ("AUS", 3.0)])?;
//! let out = transform::apply(&map, &data, false)?;
//! assert_eq!(out.get("LUX"), Some(5.0));
//! # Ok::<(), Box<dyn std::error::Error>>(())
//! ```

pub mod cli;
pub mod crossmap;
pub mod io;
pub mod label;
pub mod series;
pub mod transform;
pub mod viz;

pub use crate::crossmap::{
    build_crossmap, Crossmap, CrossmapError, CrossmapSummary, Link, RelationKind, WEIGHT_SUM_TOLERANCE,
};
pub use crate::label::{CategoryLabel, LabelError};
pub use crate::series::{IndexedSeries, SeriesError};
pub use crate::transform::{HarmonisedPanel, MultiStepChain, PanelRow, TransformError};
