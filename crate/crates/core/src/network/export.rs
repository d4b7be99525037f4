//! Serialisable snapshots of a network: JSON, Graphviz DOT and history lines.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::{FoamEvent, SpinNetwork};
use crate::lattice::ToyLattice2D;
use crate::supernode::NodeKind;

pub const EXPORT_SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, Serialize)]
pub struct NodeRecord {
    pub id: u32,
    pub supernode: u32,
    pub local: u16,
    pub kind: NodeKind,
    pub bit: u8,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuperlinkRecord {
    pub a: u32,
    pub leaf_a: u32,
    pub b: u32,
    pub leaf_b: u32,
    /// The two node-level edges, stub 0 first.
    pub edges: [[u32; 2]; 2],
}

#[derive(Clone, Debug, Serialize)]
pub struct GraphExport {
    pub schema_version: u32,
    pub variant: &'static str,
    pub n: u32,
    pub revision: u64,
    pub state_hash: String,
    pub nodes: Vec<NodeRecord>,
    /// Internal edges, each listed once with the smaller endpoint first.
    pub edges: Vec<[u32; 2]>,
    pub superlinks: Vec<SuperlinkRecord>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ToyExport {
    pub schema_version: u32,
    pub m: usize,
    /// `[row, col, bit]` per site.
    pub sites: Vec<[usize; 3]>,
    pub edges: Vec<[usize; 2]>,
}

impl SpinNetwork {
    pub fn superlinks(&self) -> Vec<SuperlinkRecord> {
        let lat = self.lattice();
        let mut out = Vec::with_capacity(self.superlink_count());
        for a in 0..lat.supernode_count() as u32 {
            for ls in 0..lat.degree() {
                let b = lat.neighbor(crate::lattice::SupernodeId(a), ls).0;
                let lo = lat.opposite_slot(ls);
                if (a, ls) > (b, lo) {
                    continue;
                }
                let e = |s: u8| [self.port_holder(a, 2 * ls as u8 + s), self.port_holder(b, 2 * lo as u8 + s)];
                out.push(SuperlinkRecord {
                    a,
                    leaf_a: lat.leaf_label(ls),
                    b,
                    leaf_b: lat.leaf_label(lo),
                    edges: [e(0), e(1)],
                });
            }
        }
        out
    }

    pub fn internal_edges(&self) -> Vec<[u32; 2]> {
        let mut out = Vec::new();
        for u in 0..self.node_count() as u32 {
            for s in self.slots(u) {
                if s.is_internal() && s.to > u {
                    out.push([u, s.to]);
                }
            }
        }
        out
    }

    pub fn export(&self) -> GraphExport {
        GraphExport {
            schema_version: EXPORT_SCHEMA_VERSION,
            variant: self.lattice().variant().name(),
            n: self.lattice().shape().n,
            revision: self.revision(),
            state_hash: self.state_hash(),
            nodes: (0..self.node_count() as u32)
                .map(|id| NodeRecord {
                    id,
                    supernode: self.supernode_of(id),
                    local: self.local_of(id),
                    kind: self.kind(id),
                    bit: self.bit(id),
                })
                .collect(),
            edges: self.internal_edges(),
            superlinks: self.superlinks(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.export()).expect("export is plain data")
    }

    /// Graphviz rendering, one cluster per supernode. Triangle members are filled.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("graph spin_network {\n  node [shape=point];\n");
        let t = self.nodes_per_supernode() as u32;
        for sn in 0..self.lattice().supernode_count() as u32 {
            let _ = writeln!(s, "  subgraph cluster_{sn} {{\n    label=\"{sn}\";");
            for u in sn * t..(sn + 1) * t {
                let color = if self.bit(u) == 1 { "black" } else { "gray70" };
                let _ = writeln!(s, "    n{u} [color={color}];");
            }
            s.push_str("  }\n");
        }
        for [a, b] in self.internal_edges() {
            let _ = writeln!(s, "  n{a} -- n{b};");
        }
        for l in self.superlinks() {
            for [a, b] in l.edges {
                let _ = writeln!(s, "  n{a} -- n{b} [style=dashed];");
            }
        }
        s.push_str("}\n");
        s
    }
}

/// One JSON object per line.
pub fn history_jsonl(events: &[FoamEvent]) -> String {
    let mut s = String::new();
    for e in events {
        s.push_str(&serde_json::to_string(e).expect("event is plain data"));
        s.push('\n');
    }
    s
}

pub fn toy_export(toy: &ToyLattice2D) -> ToyExport {
    let mut edges = Vec::new();
    for u in 0..toy.site_count() {
        for &v in toy.dual_neighbors(u) {
            if v > u {
                edges.push([u, v]);
            }
        }
    }
    ToyExport {
        schema_version: EXPORT_SCHEMA_VERSION,
        m: toy.side(),
        sites: (0..toy.site_count())
            .map(|u| {
                let (r, c) = toy.row_col(u);
                [r, c, toy.bit(u) as usize]
            })
            .collect(),
        edges,
    }
}
