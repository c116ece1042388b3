use std::fmt;

use serde::{Deserialize, Serialize};

use super::layout::SubsystemLayout;
use crate::error::{invalid, Result};

/// Grouping of subsystems `0..n` into disjoint non-empty blocks.
///
/// Stored canonically: members ascending inside each block, blocks ordered by
/// their smallest member. Two partitions are equal iff their canonical forms
/// are.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Partition {
    blocks: Vec<Vec<usize>>,
}

impl Partition {
    pub fn new(blocks: Vec<Vec<usize>>, n: usize) -> Result<Self> {
        if n == 0 {
            return invalid("partition of an empty set");
        }
        let mut seen = vec![false; n];
        let mut canon = Vec::with_capacity(blocks.len());
        for mut b in blocks {
            if b.is_empty() {
                return invalid("partition block is empty");
            }
            b.sort_unstable();
            for &i in &b {
                if i >= n {
                    return invalid(format!("subsystem {i} out of range 0..{n}"));
                }
                if seen[i] {
                    return invalid(format!("subsystem {i} appears in two blocks"));
                }
                seen[i] = true;
            }
            canon.push(b);
        }
        if let Some(missing) = seen.iter().position(|s| !s) {
            return invalid(format!("subsystem {missing} not covered by the partition"));
        }
        canon.sort_by_key(|b| b[0]);
        Ok(Self { blocks: canon })
    }

    /// Builds a partition from a block label per subsystem (restricted growth
    /// strings and arbitrary labellings both work).
    pub fn from_assignment(assign: &[usize]) -> Result<Self> {
        let k = assign.iter().copied().max().map_or(0, |m| m + 1);
        let mut blocks = vec![Vec::new(); k];
        for (i, &b) in assign.iter().enumerate() {
            blocks[b].push(i);
        }
        blocks.retain(|b| !b.is_empty());
        Self::new(blocks, assign.len())
    }

    /// Every subsystem in its own block.
    pub fn singletons(n: usize) -> Result<Self> {
        Self::new((0..n).map(|i| vec![i]).collect(), n)
    }

    /// Parses `"A1P1|A2P2"` or `"A1,P1|A2,P2"` against a layout's labels.
    /// Without commas, labels inside a block are matched greedily, longest
    /// first.
    pub fn parse(spec: &str, layout: &SubsystemLayout) -> Result<Self> {
        let mut by_len: Vec<(usize, &str)> = layout
            .labels()
            .iter()
            .enumerate()
            .map(|(i, l)| (i, l.as_str()))
            .collect();
        by_len.sort_by_key(|b| std::cmp::Reverse(b.1.len()));
        let mut blocks = Vec::new();
        for raw in spec.split('|') {
            let raw = raw.trim();
            let mut block = Vec::new();
            if raw.contains(',') {
                for tok in raw.split(',') {
                    let tok = tok.trim();
                    match layout.index_of(tok) {
                        Some(i) => block.push(i),
                        None => return invalid(format!("unknown label {tok:?} in {spec:?}")),
                    }
                }
            } else {
                let mut rest = raw;
                while !rest.is_empty() {
                    match by_len.iter().find(|(_, l)| rest.starts_with(l)) {
                        Some(&(i, l)) => {
                            block.push(i);
                            rest = &rest[l.len()..];
                        }
                        None => return invalid(format!("cannot match {rest:?} in {spec:?}")),
                    }
                }
            }
            blocks.push(block);
        }
        Self::new(blocks, layout.len())
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn k(&self) -> usize {
        self.blocks.len()
    }

    pub fn n(&self) -> usize {
        self.blocks.iter().map(Vec::len).sum()
    }

    /// Block index of every subsystem.
    pub fn assignment(&self) -> Vec<usize> {
        let mut out = vec![0; self.n()];
        for (b, block) in self.blocks.iter().enumerate() {
            for &i in block {
                out[i] = b;
            }
        }
        out
    }

    /// True if every block of `self` lies inside a single block of `coarser`.
    pub fn refines(&self, coarser: &Partition) -> bool {
        if self.n() != coarser.n() {
            return false;
        }
        let owner = coarser.assignment();
        self.blocks.iter().all(|b| b.iter().all(|&i| owner[i] == owner[b[0]]))
    }

    /// `A1P1|A2P2` style label.
    pub fn label(&self, layout: &SubsystemLayout) -> String {
        self.blocks
            .iter()
            .map(|b| b.iter().map(|&i| layout.labels()[i].as_str()).collect::<String>())
            .collect::<Vec<_>>()
            .join("|")
    }

    pub fn check_layout(&self, layout: &SubsystemLayout) -> Result<()> {
        if self.n() != layout.len() {
            return invalid(format!(
                "partition covers {} subsystems, layout has {}",
                self.n(),
                layout.len()
            ));
        }
        Ok(())
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .blocks
            .iter()
            .map(|b| b.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(","))
            .collect();
        write!(f, "{}", parts.join("|"))
    }
}

/// All set partitions of `{0..n-1}` into exactly `k` blocks, in lexicographic
/// order of their restricted growth strings.
pub fn enumerate_partitions(n: usize, k: usize) -> Result<Vec<Partition>> {
    if n == 0 || k == 0 || k > n {
        return invalid(format!("block count {k} out of range 1..={n}"));
    }
    fn grow(rgs: &mut Vec<usize>, used: usize, n: usize, k: usize, out: &mut Vec<Partition>) {
        let i = rgs.len();
        if i == n {
            if used == k {
                out.push(Partition::from_assignment(rgs).expect("restricted growth string"));
            }
            return;
        }
        // not enough positions left to open the remaining blocks
        if k - used > n - i {
            return;
        }
        for b in 0..=used.min(k - 1) {
            rgs.push(b);
            grow(rgs, used.max(b + 1), n, k, out);
            rgs.pop();
        }
    }
    let mut out = Vec::new();
    grow(&mut Vec::with_capacity(n), 0, n, k, &mut out);
    Ok(out)
}

/// Flat index of every basis state split into per-block local indices.
///
/// A block is treated as one qudit whose dimension is the product of its
/// members' dimensions, members in ascending order, first most significant.
#[derive(Debug, Clone)]
pub(crate) struct BlockIndexer {
    pub block_dims: Vec<usize>,
    /// `local[x * k + b]` is the index of basis state `x` inside block `b`.
    local: Vec<usize>,
    k: usize,
}

impl BlockIndexer {
    pub fn new(layout: &SubsystemLayout, blocks: &[Vec<usize>]) -> Self {
        let dims = layout.dims();
        let block_dims: Vec<usize> = blocks.iter().map(|b| b.iter().map(|&i| dims[i]).product()).collect();
        let k = blocks.len();
        let total = layout.total_dim();
        let mut local = vec![0; total * k];
        for x in 0..total {
            let digits = layout.digits(x);
            for (b, block) in blocks.iter().enumerate() {
                local[x * k + b] = block.iter().fold(0, |acc, &i| acc * dims[i] + digits[i]);
            }
        }
        Self { block_dims, local, k }
    }

    #[inline]
    pub fn local(&self, x: usize, b: usize) -> usize {
        self.local[x * self.k + b]
    }

    pub fn k(&self) -> usize {
        self.k
    }
}
