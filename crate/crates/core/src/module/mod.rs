//! Finitely presented graded modules over `D`, computed one degree at a time.

pub mod free;
pub mod hilbert;
pub mod presented;
pub mod resolve;
pub mod torsion;
pub mod truncate;

pub use free::{FreeModule, HomMap};
pub use hilbert::{hilbert_series, HilbertSeries};
pub use presented::{GradedPiece, PresentationJson, PresentedModule};
pub use resolve::{kernel_presentation, resolve, tor, KernelPresentation, ModuleMap, Resolution, TorTable};
pub use torsion::{torsion_submodule, TorsionMethod, TorsionReport, TorsionReportJson, TorsionVerdict};
pub use truncate::{truncate, TruncateMode, Truncation, TruncationJson};
