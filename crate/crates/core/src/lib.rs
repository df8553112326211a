//! Process-mining artifacts rendered as text for large language models.
//!
//! The crate covers the whole path from raw event data to prompts:
//!
//! ```text
//! XES / CSV  > log        > discovery (DFG, variants, temporal profile) > abstraction > orchestration
//! jsonocel   > ocel       > discovery (OC-DFG), features                > abstraction > orchestration
//! PNML, decl > discovery  (imported models)  > conformance
//! ```
//!
//! Every renderer in [`abstraction`] is deterministic and, for the kinds that
//! allow it, fits its output into a character [`abstraction::Budget`] by
//! dropping the least relevant items first.

pub mod abstraction;
pub mod conformance;
pub mod discovery;
pub mod error;
pub mod features;
pub mod log;
pub mod ocel;
pub mod orchestration;
pub mod pyfmt;
pub mod time;

pub use error::{Error, Result};
pub use log::{AttrValue, Case, Event, EventLog, FlatTable};
pub use ocel::Ocel;
