//! Plumbing shared by the generators: result sinks and discard records.

use crate::colorability::Witness;
use crate::error::Result;

/// A candidate rejected by the filter, with the reason.
#[derive(Clone, Debug)]
pub struct Discard<C> {
    pub canvas: C,
    pub witness: Witness,
}

/// Receives results work item by work item; lets a caller persist progress.
pub trait ClassSink<C> {
    fn is_done(&self, _item: &str) -> bool {
        false
    }
    /// New survivors and discards of `item`, each in key order.
    fn record(&mut self, item: &str, kept: &[C], discarded: &[Discard<C>]) -> Result<()>;
}

/// Keeps discards in memory and ignores the rest.
pub struct MemorySink<C> {
    pub discarded: Vec<Discard<C>>,
}

impl<C> Default for MemorySink<C> {
    fn default() -> Self {
        MemorySink { discarded: Vec::new() }
    }
}

impl<C: Clone> ClassSink<C> for MemorySink<C> {
    fn record(&mut self, _item: &str, _kept: &[C], discarded: &[Discard<C>]) -> Result<()> {
        self.discarded.extend_from_slice(discarded);
        Ok(())
    }
}

/// Truncated SHA-256 of `text`, as hex; names work items in journals.
pub fn item_key(text: &str) -> String {
    use sha2::{Digest, Sha256};
    hex::encode(&Sha256::digest(text.as_bytes())[..16])
}
