use num_bigint::BigUint;
use num_traits::One;

use crate::arith::zpoly::DEFAULT_KARATSUBA_THRESHOLD;

/// Resource caps shared by all modules. Breaching any of them yields
/// [`Error::Resource`](crate::Error::Resource) naming the limit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Limits {
    /// Largest degree of a symbolically expanded iterate `f^k`.
    pub poly_degree_cap: usize,
    /// Largest preimage tree.
    pub tree_node_cap: usize,
    /// Largest permutation group to enumerate.
    pub group_order_cap: usize,
    /// Magnitude below which integer factorization must succeed.
    pub factor_cap: BigUint,
    /// Coefficient count at which multiplication switches to Karatsuba.
    pub karatsuba_threshold: usize,
    /// Largest candidate set for the escape-box periodic point sweep.
    pub box_candidate_cap: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            poly_degree_cap: 4096,
            tree_node_cap: 100_000,
            group_order_cap: 1_000_000,
            factor_cap: BigUint::one() << 64,
            karatsuba_threshold: DEFAULT_KARATSUBA_THRESHOLD,
            box_candidate_cap: 2_000_000,
        }
    }
}
