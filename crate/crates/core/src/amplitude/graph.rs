use std::fmt;

use serde::{Deserialize, Serialize};

use super::{AmplitudeError, LINKS, NODES, SLOTS};

/// A `(node, slot)` pair, both 0-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Endpoint {
    pub node: usize,
    pub slot: usize,
}

impl Endpoint {
    pub const fn new(node: usize, slot: usize) -> Self {
        Self { node, slot }
    }

    /// Position of this qubit in the 20-qubit product register.
    pub fn qubit(&self) -> usize {
        self.node * SLOTS + self.slot
    }
}

/// A link; the first singlet factor sits on `first`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Link {
    pub first: Endpoint,
    pub second: Endpoint,
}

impl Link {
    pub fn swapped(self) -> Link {
        Link { first: self.second, second: self.first }
    }
}

/// How each node's four slots are assigned to its incident links.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SlotConvention {
    /// Slots follow increasing partner node.
    #[default]
    Lexicographic,
    /// Node `n` assigns slots to partners `n+1, n+2, n+3, n+4 (mod 5)`.
    Cyclic,
    /// Node `n` assigns slots to partners `n−1, n−2, n−3, n−4 (mod 5)`.
    CyclicReversed,
}

impl SlotConvention {
    pub const ALL: [SlotConvention; 3] =
        [SlotConvention::Lexicographic, SlotConvention::Cyclic, SlotConvention::CyclicReversed];

    fn slot_of(self, node: usize, partner: usize) -> usize {
        match self {
            SlotConvention::Lexicographic => {
                if partner < node {
                    partner
                } else {
                    partner - 1
                }
            }
            SlotConvention::Cyclic => (partner + NODES - node) % NODES - 1,
            SlotConvention::CyclicReversed => (node + NODES - partner) % NODES - 1,
        }
    }
}

impl fmt::Display for SlotConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SlotConvention::Lexicographic => "lexicographic",
            SlotConvention::Cyclic => "cyclic",
            SlotConvention::CyclicReversed => "cyclic-reversed",
        })
    }
}

/// Five 4-valent nodes joined pairwise by ten links.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpinNetworkGraph {
    links: Vec<Link>,
    /// `partner[node][slot]`: the endpoint across the link at that slot.
    #[serde(skip)]
    partner: [[Endpoint; SLOTS]; NODES],
    /// Index of the link occupying each slot.
    #[serde(skip)]
    link_at: [[usize; SLOTS]; NODES],
}

impl SpinNetworkGraph {
    /// Validates that every `(node, slot)` is used exactly once and that the
    /// links join each unordered node pair exactly once.
    pub fn new(links: Vec<Link>) -> Result<Self, AmplitudeError> {
        let bad = |msg: String| Err(AmplitudeError::MalformedGraph(msg));
        if links.len() != LINKS {
            return bad(format!("expected {LINKS} links, got {}", links.len()));
        }
        let unset = Endpoint::new(usize::MAX, usize::MAX);
        let mut partner = [[unset; SLOTS]; NODES];
        let mut link_at = [[usize::MAX; SLOTS]; NODES];
        let mut pairs = [[false; NODES]; NODES];
        for (i, link) in links.iter().enumerate() {
            for e in [link.first, link.second] {
                if e.node >= NODES || e.slot >= SLOTS {
                    return bad(format!("link {i} endpoint {e:?} out of range"));
                }
            }
            let (a, b) = (link.first, link.second);
            if a.node == b.node {
                return bad(format!("link {i} is a loop at node {}", a.node));
            }
            let (lo, hi) = (a.node.min(b.node), a.node.max(b.node));
            if pairs[lo][hi] {
                return bad(format!("nodes {lo} and {hi} are joined twice"));
            }
            pairs[lo][hi] = true;
            for (e, other) in [(a, b), (b, a)] {
                if link_at[e.node][e.slot] != usize::MAX {
                    return bad(format!("slot {} of node {} is used twice", e.slot, e.node));
                }
                link_at[e.node][e.slot] = i;
                partner[e.node][e.slot] = other;
            }
        }
        Ok(Self { links, partner, link_at })
    }

    /// K5 with links `(n, m)`, `n < m`, in lexicographic order, the first
    /// singlet factor on the lower node, and slots assigned by `convention`.
    pub fn k5(convention: SlotConvention) -> Self {
        let mut links = Vec::with_capacity(LINKS);
        for n in 0..NODES {
            for m in (n + 1)..NODES {
                links.push(Link {
                    first: Endpoint::new(n, convention.slot_of(n, m)),
                    second: Endpoint::new(m, convention.slot_of(m, n)),
                });
            }
        }
        Self::new(links).expect("K5 construction is valid")
    }

    pub fn links(&self) -> &[Link] {
        &self.links
    }

    pub fn partner(&self, e: Endpoint) -> Endpoint {
        self.partner[e.node][e.slot]
    }

    /// Index of the link at `e`, and whether `e` is that link's first endpoint.
    pub fn link_at(&self, e: Endpoint) -> (usize, bool) {
        let i = self.link_at[e.node][e.slot];
        (i, self.links[i].first == e)
    }

    /// Partner node of each slot of `node`.
    pub fn slot_partners(&self, node: usize) -> [usize; SLOTS] {
        self.partner[node].map(|e| e.node)
    }

    /// Same graph with link `index` reversed.
    pub fn with_link_swapped(&self, index: usize) -> Self {
        let mut links = self.links.clone();
        links[index] = links[index].swapped();
        Self::new(links).expect("reversal keeps the graph valid")
    }

    /// Relabels node `n` as `perm[n]`, keeping link orientation.
    pub fn relabel_nodes(&self, perm: [usize; NODES]) -> Result<Self, AmplitudeError> {
        let map = |e: Endpoint| Endpoint::new(perm[e.node], e.slot);
        Self::new(self.links.iter().map(|l| Link { first: map(l.first), second: map(l.second) }).collect())
    }
}

/// K5 with lexicographic slot assignment.
pub fn canonical_k5() -> SpinNetworkGraph {
    SpinNetworkGraph::k5(SlotConvention::Lexicographic)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_node_three_partners() {
        // node 3 in 1-based labelling
        let g = canonical_k5();
        assert_eq!(g.slot_partners(2), [0, 1, 3, 4]);
        assert_eq!(g.links().len(), 10);
    }

    #[test]
    fn every_slot_is_used_once() {
        for conv in SlotConvention::ALL {
            let g = SpinNetworkGraph::k5(conv);
            let mut seen = [[0; SLOTS]; NODES];
            for l in g.links() {
                seen[l.first.node][l.first.slot] += 1;
                seen[l.second.node][l.second.slot] += 1;
            }
            assert!(seen.iter().flatten().all(|&c| c == 1), "{conv}");
        }
    }

    #[test]
    fn cyclic_slot_order() {
        let g = SpinNetworkGraph::k5(SlotConvention::Cyclic);
        assert_eq!(g.slot_partners(0), [1, 2, 3, 4]);
        assert_eq!(g.slot_partners(3), [4, 0, 1, 2]);
        let r = SpinNetworkGraph::k5(SlotConvention::CyclicReversed);
        assert_eq!(r.slot_partners(0), [4, 3, 2, 1]);
    }

    #[test]
    fn malformed_graphs_are_rejected() {
        let g = canonical_k5();
        let mut links = g.links().to_vec();
        links.pop();
        assert!(SpinNetworkGraph::new(links.clone()).is_err());

        let mut dup = g.links().to_vec();
        dup[1].second = dup[0].second;
        assert!(SpinNetworkGraph::new(dup).is_err());

        let mut looped = g.links().to_vec();
        looped[0].second = Endpoint::new(0, 3);
        assert!(SpinNetworkGraph::new(looped).is_err());

        let mut far = g.links().to_vec();
        far[0].first.slot = 7;
        assert!(SpinNetworkGraph::new(far).is_err());
    }
}
