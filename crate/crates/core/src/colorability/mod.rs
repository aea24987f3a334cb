//! List-coloring decision machinery.
//!
//! Everything here is conservative in one direction: a positive certificate
//! (colorable, reducible) is always sound, a negative answer only means that no
//! certificate was found.

mod alon_tarsi;
mod greedy;
pub mod oracle;
mod search;
mod special;

use std::fmt;

use crate::graph::{bits, Graph};

pub use alon_tarsi::{
    alon_tarsi_certify, alon_tarsi_orientation, eulerian_parity_difference, AlonTarsiConfig, Orientation,
};
pub use greedy::greedy_certify;
pub(crate) use search::relabel as relabel_witness;
pub use search::{criticality_filter, reducibility_search, FilterConfig};
pub use special::{find_special_config, known_special_configs, SpecialConfig};

/// Required list size per vertex. Values may be zero or negative after residual
/// reductions; such vertices cannot be colored from an arbitrary list.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SizeFunction(pub Vec<i32>);

impl SizeFunction {
    pub fn constant(n: usize, value: i32) -> Self {
        SizeFunction(vec![value; n])
    }

    #[inline]
    pub fn get(&self, v: usize) -> i32 {
        self.0[v]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Restriction to the vertices of `ids`, in that order.
    pub fn restrict(&self, ids: &[usize]) -> SizeFunction {
        SizeFunction(ids.iter().map(|&v| self.0[v]).collect())
    }
}

impl fmt::Debug for SizeFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "s{:?}", self.0)
    }
}

impl From<Vec<i32>> for SizeFunction {
    fn from(v: Vec<i32>) -> Self {
        SizeFunction(v)
    }
}

/// `v -> s(v) - |N(v) ∩ removed|` on the vertices outside `removed`, in increasing
/// vertex order. The second component lists the surviving original ids.
pub fn residual_sizes(g: &Graph, removed: u64, s: &SizeFunction) -> (SizeFunction, Vec<usize>) {
    let keep = g.all_mask() & !removed;
    let ids: Vec<usize> = bits(keep).collect();
    let sizes = ids.iter().map(|&v| s.get(v) - (g.nbr_mask(v) & removed).count_ones() as i32).collect();
    (SizeFunction(sizes), ids)
}

/// Evidence behind a reducibility verdict. Vertex ids refer to the graph handed to
/// the filter (for [`criticality_filter`], the whole canvas).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    /// The canvas has nothing outside its boundary subgraph.
    EqualsBoundary,
    /// A vertex whose residual size exceeds its degree in the remaining graph.
    SpareColor { vertex: usize },
    /// A known reducible configuration found as an induced subgraph.
    Special { config: SpecialConfig, vertices: Vec<usize> },
    /// An induced subgraph that the greedy heuristic colors for every list assignment.
    Greedy { vertices: Vec<usize> },
    /// An induced subgraph with an Alon–Tarsi orientation; `outdegrees` follows `vertices`.
    AlonTarsi { vertices: Vec<usize>, outdegrees: Vec<u8> },
    /// A face walk of a prism skeleton whose contents are not a cycle-canvas candidate.
    FaceFill { face: Vec<usize> },
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn list(f: &mut fmt::Formatter<'_>, vs: &[usize]) -> fmt::Result {
            let s: Vec<String> = vs.iter().map(usize::to_string).collect();
            write!(f, "{}", s.join(","))
        }
        match self {
            Witness::EqualsBoundary => write!(f, "equals-boundary"),
            Witness::SpareColor { vertex } => write!(f, "spare-color:{vertex}"),
            Witness::Special { config, vertices } => {
                write!(f, "special-{config}:")?;
                list(f, vertices)
            }
            Witness::Greedy { vertices } => {
                write!(f, "greedy:")?;
                list(f, vertices)
            }
            Witness::FaceFill { face } => {
                write!(f, "face-fill:")?;
                list(f, face)
            }
            Witness::AlonTarsi { vertices, outdegrees } => {
                write!(f, "alon-tarsi:")?;
                list(f, vertices)?;
                let d: Vec<String> = outdegrees.iter().map(u8::to_string).collect();
                write!(f, "/outdeg:{}", d.join(","))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    ProvablyReducible(Witness),
    PossiblyCritical,
}

impl Verdict {
    pub fn is_reducible(&self) -> bool {
        matches!(self, Verdict::ProvablyReducible(_))
    }

    pub fn witness(&self) -> Option<&Witness> {
        match self {
            Verdict::ProvablyReducible(w) => Some(w),
            Verdict::PossiblyCritical => None,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::ProvablyReducible(w) => write!(f, "ProvablyReducible\t{w}"),
            Verdict::PossiblyCritical => write!(f, "PossiblyCritical"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn wheel5() -> Graph {
        let mut g = Graph::empty(6).unwrap();
        for i in 0..5 {
            g.add_edge(i, (i + 1) % 5);
            g.add_edge(i, 5);
        }
        g
    }

    #[test]
    fn residual_empty_removal() {
        let g = wheel5();
        let s = SizeFunction::constant(6, 5);
        let (r, ids) = residual_sizes(&g, 0, &s);
        assert_eq!(r, s);
        assert_eq!(ids, (0..6).collect::<Vec<_>>());
    }

    #[test]
    fn residual_wheel_rim_removed() {
        let g = wheel5();
        let (r, ids) = residual_sizes(&g, 0b11111, &SizeFunction::constant(6, 5));
        assert_eq!(ids, vec![5]);
        assert_eq!(r.0, vec![0]);
    }
}
