//! TreePRG seed trees with sibling-path reveal, and Merkle trees with
//! authentication paths for subsets of leaves.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::hash::{Hasher, Role, Xof};

fn expand_children(salt: &[u8], e: u32, node: usize, parent: &[u8]) -> (Vec<u8>, Vec<u8>) {
    let mut out = vec![0u8; 2 * parent.len()];
    let mut s = Xof::new(Role::SeedTree)
        .update(salt)
        .u32(e)
        .u32(node as u32)
        .update(parent)
        .sampler();
    s.bytes(&mut out);
    let right = out.split_off(parent.len());
    (out, right)
}

/// A complete binary tree of seeds in heap order: node 1 is the root, node i
/// has children 2i and 2i+1, and leaf j ∈ [1, N] sits at node N + j − 1.
/// Every expansion is bound to the salt, the round and the parent's position.
#[derive(Clone, Debug)]
pub struct SeedTree {
    leaves: usize,
    nodes: Vec<Vec<u8>>,
}

impl SeedTree {
    pub fn expand(root: &[u8], salt: &[u8], e: u32, leaves: usize) -> Result<Self> {
        if !leaves.is_power_of_two() || leaves < 2 {
            return Err(Error::InvalidParameters(format!(
                "seed tree needs a power-of-two leaf count, got {leaves}"
            )));
        }
        let mut nodes = vec![Vec::new(); 2 * leaves];
        nodes[1] = root.to_vec();
        for i in 1..leaves {
            let (l, r) = expand_children(salt, e, i, &nodes[i]);
            nodes[2 * i] = l;
            nodes[2 * i + 1] = r;
        }
        Ok(Self { leaves, nodes })
    }

    pub fn leaf_count(&self) -> usize {
        self.leaves
    }

    pub fn depth(&self) -> usize {
        self.leaves.trailing_zeros() as usize
    }

    /// Seed of leaf `i` (1-based).
    pub fn leaf(&self, i: usize) -> &[u8] {
        &self.nodes[self.leaves + i - 1]
    }

    pub fn leaves(&self) -> impl Iterator<Item = &[u8]> {
        self.nodes[self.leaves..].iter().map(|v| v.as_slice())
    }

    /// The D sibling seeds on the path from leaf `hidden` to the root, bottom-up.
    pub fn sibling_path(&self, hidden: usize) -> Result<Vec<Vec<u8>>> {
        if hidden == 0 || hidden > self.leaves {
            return Err(Error::IndexOutOfRange {
                index: hidden,
                max: self.leaves,
            });
        }
        let mut node = self.leaves + hidden - 1;
        let mut path = Vec::with_capacity(self.depth());
        while node > 1 {
            path.push(self.nodes[node ^ 1].clone());
            node >>= 1;
        }
        Ok(path)
    }
}

/// Recomputes every leaf seed except the hidden one from its sibling path.
pub fn leaves_from_path(
    path: &[Vec<u8>],
    hidden: usize,
    salt: &[u8],
    e: u32,
    leaves: usize,
) -> Result<Vec<Option<Vec<u8>>>> {
    if !leaves.is_power_of_two() || leaves < 2 {
        return Err(Error::InvalidParameters(format!(
            "seed tree needs a power-of-two leaf count, got {leaves}"
        )));
    }
    if hidden == 0 || hidden > leaves {
        return Err(Error::IndexOutOfRange {
            index: hidden,
            max: leaves,
        });
    }
    if path.len() != leaves.trailing_zeros() as usize {
        return Err(Error::Decode("sibling path has the wrong length".into()));
    }
    let mut nodes: Vec<Option<Vec<u8>>> = vec![None; 2 * leaves];
    let mut node = leaves + hidden - 1;
    for seed in path {
        nodes[node ^ 1] = Some(seed.clone());
        node >>= 1;
    }
    for i in 1..leaves {
        if let Some(parent) = nodes[i].take() {
            let (l, r) = expand_children(salt, e, i, &parent);
            nodes[2 * i] = Some(l);
            nodes[2 * i + 1] = Some(r);
            nodes[i] = Some(parent);
        }
    }
    Ok(nodes.split_off(leaves))
}

/// Merkle root over `leaves` with H_M: a single leaf hashes to H_M(v), larger
/// ranges split with ⌈n/2⌉ leaves on the left and hash H_M(left ‖ right).
pub fn merkle_root(lambda: usize, leaves: &[Vec<u8>]) -> Vec<u8> {
    assert!(!leaves.is_empty());
    node_hash(lambda, leaves, 0, leaves.len())
}

fn node_hash(lambda: usize, leaves: &[Vec<u8>], start: usize, len: usize) -> Vec<u8> {
    let mut h = Hasher::new(Role::Merkle, lambda);
    if len == 1 {
        h.update(&leaves[start]);
    } else {
        let left = len.div_ceil(2);
        h.update(&node_hash(lambda, leaves, start, left));
        h.update(&node_hash(lambda, leaves, start + left, len - left));
    }
    h.finish()
}

/// A subtree identified by its leaf range and depth below the root.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
struct Span {
    depth: usize,
    start: usize,
    len: usize,
}

fn collect_auth(span: Span, opened: &[usize], out: &mut Vec<Span>) {
    let inside = opened
        .iter()
        .any(|&i| i >= span.start && i < span.start + span.len);
    if !inside {
        out.push(span);
        return;
    }
    if span.len == 1 {
        return;
    }
    let left = span.len.div_ceil(2);
    collect_auth(
        Span {
            depth: span.depth + 1,
            start: span.start,
            len: left,
        },
        opened,
        out,
    );
    collect_auth(
        Span {
            depth: span.depth + 1,
            start: span.start + left,
            len: span.len - left,
        },
        opened,
        out,
    );
}

/// Subtrees whose digests form the authentication path, bottom-up then left to right.
fn auth_spans(n: usize, opened: &[usize]) -> Result<Vec<Span>> {
    if opened.is_empty() {
        return Err(Error::InvalidParameters(
            "authentication needs at least one opened leaf".into(),
        ));
    }
    let mut zero_based = Vec::with_capacity(opened.len());
    for &i in opened {
        if i == 0 || i > n {
            return Err(Error::IndexOutOfRange { index: i, max: n });
        }
        if zero_based.contains(&(i - 1)) {
            return Err(Error::InvalidParameters(format!("leaf {i} opened twice")));
        }
        zero_based.push(i - 1);
    }
    let mut spans = Vec::new();
    collect_auth(
        Span {
            depth: 0,
            start: 0,
            len: n,
        },
        &zero_based,
        &mut spans,
    );
    spans.sort_by(|a, b| b.depth.cmp(&a.depth).then(a.start.cmp(&b.start)));
    Ok(spans)
}

/// Number of digests in the authentication path for the 1-based leaves `opened`.
pub fn merkle_auth_len(n: usize, opened: &[usize]) -> Result<usize> {
    Ok(auth_spans(n, opened)?.len())
}

pub fn merkle_auth(lambda: usize, leaves: &[Vec<u8>], opened: &[usize]) -> Result<Vec<Vec<u8>>> {
    Ok(auth_spans(leaves.len(), opened)?
        .into_iter()
        .map(|s| node_hash(lambda, leaves, s.start, s.len))
        .collect())
}

/// Root implied by the opened leaves and an authentication path, or `None`
/// if the path does not have the expected shape.
pub fn merkle_root_from_auth(
    lambda: usize,
    n: usize,
    opened: &[usize],
    opened_leaves: &[Vec<u8>],
    auth: &[Vec<u8>],
) -> Result<Option<Vec<u8>>> {
    let spans = auth_spans(n, opened)?;
    if spans.len() != auth.len() || opened.len() != opened_leaves.len() {
        return Ok(None);
    }
    let known: HashMap<(usize, usize), &Vec<u8>> = spans
        .iter()
        .zip(auth)
        .map(|(s, d)| ((s.start, s.len), d))
        .collect();
    let leaves: HashMap<usize, &Vec<u8>> =
        opened.iter().map(|&i| i - 1).zip(opened_leaves).collect();
    fn rebuild(
        lambda: usize,
        start: usize,
        len: usize,
        known: &HashMap<(usize, usize), &Vec<u8>>,
        leaves: &HashMap<usize, &Vec<u8>>,
    ) -> Vec<u8> {
        if let Some(d) = known.get(&(start, len)) {
            return (*d).clone();
        }
        let mut h = Hasher::new(Role::Merkle, lambda);
        if len == 1 {
            h.update(leaves[&start]);
        } else {
            let left = len.div_ceil(2);
            h.update(&rebuild(lambda, start, left, known, leaves));
            h.update(&rebuild(lambda, start + left, len - left, known, leaves));
        }
        h.finish()
    }
    Ok(Some(rebuild(lambda, 0, n, &known, &leaves)))
}

pub fn merkle_verify(
    lambda: usize,
    n: usize,
    opened: &[usize],
    opened_leaves: &[Vec<u8>],
    auth: &[Vec<u8>],
    root: &[u8],
) -> Result<bool> {
    Ok(merkle_root_from_auth(lambda, n, opened, opened_leaves, auth)?.is_some_and(|r| r == root))
}
