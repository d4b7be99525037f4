//! The trivalent triple tree that replaces one 48-valent lattice site.
//!
//! A central triangle roots three binary trees, one per branch. Each root-to-leaf
//! path spells the leaf's code, and in the F4 variant half the leaves (those
//! whose last path bit is 1) are expanded into triangles. Every leaf exposes two
//! free stubs for the super-link to the neighbouring supernode.

use serde::Serialize;

use crate::error::LeafError;

/// Which lattice the supernode template is built for.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    /// 48 leaves: depth-4 trees, triangles on odd leaves. 144 nodes.
    F4,
    /// 24 plain leaves: depth-3 trees. 48 nodes.
    D4,
}

impl Variant {
    pub fn name(self) -> &'static str {
        match self {
            Variant::F4 => "F4",
            Variant::D4 => "D4",
        }
    }

    /// Number of binary choices below each branch root.
    pub fn path_bits(self) -> u32 {
        match self {
            Variant::F4 => 4,
            Variant::D4 => 3,
        }
    }

    pub fn leaf_count(self) -> usize {
        3 << self.path_bits()
    }

    /// Leaf labels `K` present in this variant, ascending.
    pub fn leaf_labels(self) -> Vec<u32> {
        match self {
            Variant::F4 => (1..=48).collect(),
            Variant::D4 => (1..=48).step_by(2).collect(),
        }
    }

    /// Position of leaf `K` in [`Variant::leaf_labels`].
    pub fn slot_of(self, k: u32) -> Result<usize, LeafError> {
        let code = leaf_code(k)?;
        match self {
            Variant::F4 => Ok(code.index() as usize),
            Variant::D4 if code.b0 == 0 => Ok(code.index() as usize / 2),
            Variant::D4 => Err(LeafError::NotInVariant(k, self.name())),
        }
    }
}

/// Bits of `m = K − 1`, with the branch `β = 2·b5 + b4`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize)]
pub struct LeafCode {
    pub k: u32,
    pub branch: u8,
    pub b5: u8,
    pub b4: u8,
    pub b3: u8,
    pub b2: u8,
    pub b1: u8,
    pub b0: u8,
}

impl LeafCode {
    /// `m = K − 1 = 16β + 8b3 + 4b2 + 2b1 + b0`.
    pub fn index(&self) -> u32 {
        self.k - 1
    }

    /// `(b3, b2, b1, b0)`, root first.
    pub fn path(&self) -> [u8; 4] {
        [self.b3, self.b2, self.b1, self.b0]
    }
}

/// Decode leaf label `K ∈ 1..=48`.
pub fn leaf_code(k: u32) -> Result<LeafCode, LeafError> {
    if !(1..=48).contains(&k) {
        return Err(LeafError::OutOfRange(k));
    }
    let m = k - 1;
    let bit = |n: u32| ((m >> n) & 1) as u8;
    Ok(LeafCode {
        k,
        branch: (2 * bit(5) + bit(4)),
        b5: bit(5),
        b4: bit(4),
        b3: bit(3),
        b2: bit(2),
        b1: bit(1),
        b0: bit(0),
    })
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NodeKind {
    CentralTriangle,
    Internal,
    PlainLeaf,
    TriangleLeafMember,
}

/// One end of a template node's three edges.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum TemplateSlot {
    Internal(u16),
    /// Free stub `stub ∈ {0, 1}` of the leaf at `leaf_slot`.
    Stub { leaf_slot: u8, stub: u8 },
}

#[derive(Clone, Debug, Serialize)]
pub struct LeafDescriptor {
    pub code: LeafCode,
    /// Local node carrying stub 0 and stub 1 (the same node for plain leaves).
    pub stub_nodes: [u16; 2],
    /// Node attached to the tree: the plain leaf itself, or the triangle's root.
    pub attach: u16,
    /// Internal tree node the leaf hangs from.
    pub parent: u16,
    pub triangle: bool,
}

#[derive(Clone, Debug)]
pub struct SupernodeGraph {
    variant: Variant,
    kinds: Vec<NodeKind>,
    adjacency: Vec<[TemplateSlot; 3]>,
    edges: Vec<(u16, u16)>,
    leaves: Vec<LeafDescriptor>,
}

/// The F4 template: 144 nodes, 48 leaves, 96 free stubs.
pub fn build_supernode() -> SupernodeGraph {
    SupernodeGraph::build(Variant::F4)
}

impl SupernodeGraph {
    pub fn build(variant: Variant) -> Self {
        let depth = variant.path_bits();
        let internal_per_branch = (1usize << depth) - 1;
        let leaves_per_branch = 1usize << depth;
        let labels = variant.leaf_labels();

        let mut kinds = vec![NodeKind::CentralTriangle; 3];
        kinds.extend(std::iter::repeat_n(NodeKind::Internal, 3 * internal_per_branch));
        let internal = |branch: usize, heap: usize| (3 + branch * internal_per_branch + heap) as u16;

        let mut edges: Vec<(u16, u16)> = vec![(0, 1), (1, 2), (2, 0)];
        for branch in 0..3 {
            edges.push((branch as u16, internal(branch, 0)));
            for h in 0..internal_per_branch {
                for child in [2 * h + 1, 2 * h + 2] {
                    if child < internal_per_branch {
                        edges.push((internal(branch, h), internal(branch, child)));
                    }
                }
            }
        }

        let mut leaves = Vec::with_capacity(labels.len());
        for (slot, &k) in labels.iter().enumerate() {
            let code = leaf_code(k).expect("variant labels are in range");
            let branch = slot / leaves_per_branch;
            let within = slot % leaves_per_branch;
            // Heap index of the leaf position is internal_per_branch + within;
            // its parent is (that - 1) / 2.
            let parent = internal(branch, (internal_per_branch + within - 1) / 2);
            let triangle = variant == Variant::F4 && code.b0 == 1;
            let base = kinds.len() as u16;
            let desc = if triangle {
                kinds.extend([NodeKind::TriangleLeafMember; 3]);
                let (t0, t1, t2) = (base, base + 1, base + 2);
                edges.push((parent, t0));
                edges.extend([(t0, t1), (t1, t2), (t2, t0)]);
                LeafDescriptor { code, stub_nodes: [t1, t2], attach: t0, parent, triangle }
            } else {
                kinds.push(NodeKind::PlainLeaf);
                edges.push((parent, base));
                LeafDescriptor { code, stub_nodes: [base, base], attach: base, parent, triangle }
            };
            leaves.push(desc);
        }

        let placeholder = TemplateSlot::Internal(u16::MAX);
        let mut adjacency = vec![[placeholder; 3]; kinds.len()];
        let mut fill = vec![0usize; kinds.len()];
        let mut put = |node: u16, slot: TemplateSlot| {
            let n = node as usize;
            assert!(fill[n] < 3, "template node {node} over-full");
            adjacency[n][fill[n]] = slot;
            fill[n] += 1;
        };
        for &(a, b) in &edges {
            put(a, TemplateSlot::Internal(b));
            put(b, TemplateSlot::Internal(a));
        }
        for (slot, leaf) in leaves.iter().enumerate() {
            for stub in 0..2u8 {
                put(leaf.stub_nodes[stub as usize], TemplateSlot::Stub { leaf_slot: slot as u8, stub });
            }
        }

        SupernodeGraph { variant, kinds, adjacency, edges, leaves }
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn node_count(&self) -> usize {
        self.kinds.len()
    }

    pub fn kind(&self, node: u16) -> NodeKind {
        self.kinds[node as usize]
    }

    pub fn kinds(&self) -> &[NodeKind] {
        &self.kinds
    }

    /// Internal edges in canonical construction order.
    pub fn edges(&self) -> &[(u16, u16)] {
        &self.edges
    }

    pub fn adjacency(&self, node: u16) -> &[TemplateSlot; 3] {
        &self.adjacency[node as usize]
    }

    /// Leaves in slot order (ascending `K`).
    pub fn leaves(&self) -> &[LeafDescriptor] {
        &self.leaves
    }

    pub fn leaf(&self, k: u32) -> Result<&LeafDescriptor, LeafError> {
        Ok(&self.leaves[self.variant.slot_of(k)?])
    }

    pub fn free_stub_count(&self) -> usize {
        self.adjacency
            .iter()
            .flatten()
            .filter(|s| matches!(s, TemplateSlot::Stub { .. }))
            .count()
    }

    fn internal_neighbors(&self, node: u16) -> impl Iterator<Item = u16> + '_ {
        self.adjacency[node as usize].iter().filter_map(|s| match s {
            TemplateSlot::Internal(n) => Some(*n),
            TemplateSlot::Stub { .. } => None,
        })
    }

    /// 1 if the node lies on a 3-cycle of internal edges, else 0.
    pub fn bit(&self, node: u16) -> u8 {
        let nbrs: Vec<u16> = self.internal_neighbors(node).collect();
        for (i, &a) in nbrs.iter().enumerate() {
            for &b in &nbrs[i + 1..] {
                if a != b && self.internal_neighbors(a).any(|x| x == b) {
                    return 1;
                }
            }
        }
        0
    }

    pub fn bits(&self) -> Vec<u8> {
        (0..self.node_count() as u16).map(|n| self.bit(n)).collect()
    }

    pub fn is_connected(&self) -> bool {
        let mut seen = vec![false; self.node_count()];
        let mut stack = vec![0u16];
        seen[0] = true;
        while let Some(n) = stack.pop() {
            for m in self.internal_neighbors(n) {
                if !seen[m as usize] {
                    seen[m as usize] = true;
                    stack.push(m);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }
}
