use num_rational::BigRational;
use serde::Serialize;

use super::require_nonlinear;
use crate::arith::rational::serde_rational;
use crate::arith::{rational_roots, UniPoly};
use crate::error::{Error, Result};
use crate::Limits;

/// Distinct rational solutions of `f(x) = beta`.
pub fn preimages(f: &UniPoly, beta: &BigRational) -> Result<Vec<BigRational>> {
    require_nonlinear(f)?;
    rational_roots(&(f - &UniPoly::constant(beta.clone())))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PreimageNode {
    #[serde(with = "serde_rational")]
    pub value: BigRational,
    pub depth: usize,
    pub parent: Option<usize>,
    pub children: Vec<usize>,
}

/// Breadth-first tree of rational backward orbits. Node 0 is the root.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PreimageTree {
    pub nodes: Vec<PreimageNode>,
    pub depth_limit: usize,
    /// First depth with no nodes, if reached within the limit.
    pub termination_depth: Option<usize>,
}

impl PreimageTree {
    pub fn root(&self) -> &PreimageNode {
        &self.nodes[0]
    }

    /// Every branch ended before the depth limit.
    pub fn terminated(&self) -> bool {
        self.termination_depth.is_some()
    }

    pub fn level(&self, depth: usize) -> impl Iterator<Item = &PreimageNode> {
        self.nodes.iter().filter(move |n| n.depth == depth)
    }

    pub fn level_counts(&self) -> Vec<usize> {
        let max = self.nodes.iter().map(|n| n.depth).max().unwrap_or(0);
        (0..=max).map(|d| self.level(d).count()).collect()
    }

    /// Nodes on the longest root-to-leaf chain.
    pub fn longest_chain(&self) -> usize {
        self.nodes.iter().map(|n| n.depth).max().unwrap_or(0) + 1
    }

    /// Checks `f(child) = parent` on every edge and the `(deg f)^i` bound on
    /// level sizes.
    pub fn verify(&self, f: &UniPoly) -> bool {
        let edges_ok = self.nodes.iter().all(|n| match n.parent {
            Some(p) => f.eval(&n.value) == self.nodes[p].value && n.depth == self.nodes[p].depth + 1,
            None => n.depth == 0,
        });
        let d = f.deg() as u128;
        let counts_ok = self
            .level_counts()
            .iter()
            .enumerate()
            .all(|(i, &c)| (c as u128) <= d.saturating_pow(i as u32));
        edges_ok && counts_ok
    }
}

pub fn preimage_tree(
    f: &UniPoly,
    root: &BigRational,
    depth: usize,
    limits: &Limits,
) -> Result<PreimageTree> {
    require_nonlinear(f)?;
    let mut nodes = vec![PreimageNode {
        value: root.clone(),
        depth: 0,
        parent: None,
        children: Vec::new(),
    }];
    let mut frontier = vec![0usize];
    let mut termination_depth = None;
    for level in 0..depth {
        let mut next = Vec::new();
        for &idx in &frontier {
            let kids = preimages(f, &nodes[idx].value)?;
            for k in kids {
                if nodes.len() >= limits.tree_node_cap {
                    return Err(Error::resource(
                        "tree_node_cap",
                        format!("preimage tree exceeds {} nodes", limits.tree_node_cap),
                    ));
                }
                let id = nodes.len();
                nodes.push(PreimageNode {
                    value: k,
                    depth: level + 1,
                    parent: Some(idx),
                    children: Vec::new(),
                });
                nodes[idx].children.push(id);
                next.push(id);
            }
        }
        if next.is_empty() {
            termination_depth = Some(level + 1);
            break;
        }
        frontier = next;
    }
    Ok(PreimageTree {
        nodes,
        depth_limit: depth,
        termination_depth,
    })
}
