use std::path::Path;

use anyhow::{bail, Context};
use hyperfoam_core::network::{FoamEvent, Move, Pairing, SpinNetwork};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged, deny_unknown_fields)]
pub enum Step {
    Invert { supernode: u32, leaf: u32 },
    Move { edge: [u32; 2], pairing: Pairing },
}

/// A step and where it came from: the line of a JSON-lines file, or the
/// 1-based position in a JSON array.
#[derive(Clone, Debug)]
pub struct Located {
    pub step: Step,
    pub at: String,
}

pub fn load(path: &Path) -> anyhow::Result<Vec<Located>> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading script {}", path.display()))?;
    parse(&text)
}

pub fn parse(text: &str) -> anyhow::Result<Vec<Located>> {
    if text.trim_start().starts_with('[') {
        let steps: Vec<serde_json::Value> = serde_json::from_str(text).context("script is not a JSON array")?;
        return steps
            .into_iter()
            .enumerate()
            .map(|(i, v)| {
                let at = format!("entry {}", i + 1);
                let step = serde_json::from_value(v).with_context(|| format!("{at}: not a step"))?;
                Ok(Located { step, at })
            })
            .collect();
    }
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let at = format!("line {}", i + 1);
        let step = serde_json::from_str(line).with_context(|| format!("{at}: not a step"))?;
        out.push(Located { step, at });
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct Skipped {
    pub at: String,
    pub reason: String,
}

/// Run steps in order. Illegal steps abort unless `skip_illegal`, in which
/// case they are collected.
pub fn run(net: &mut SpinNetwork, steps: &[Located], skip_illegal: bool) -> anyhow::Result<Vec<Skipped>> {
    let mut skipped = Vec::new();
    for s in steps {
        let r: Result<Vec<FoamEvent>, _> = match &s.step {
            Step::Invert { supernode, leaf } => net.invert_bit(*supernode, *leaf),
            Step::Move { edge, pairing } => net.pachner_22(Move::new(edge[0], edge[1], *pairing)).map(|e| vec![e]),
        };
        if let Err(e) = r {
            if skip_illegal {
                skipped.push(Skipped { at: s.at.clone(), reason: e.to_string() });
            } else {
                bail!("script {}: {e}", s.at);
            }
        }
    }
    Ok(skipped)
}

pub fn load_history(path: &Path) -> anyhow::Result<Vec<FoamEvent>> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading history {}", path.display()))?;
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| serde_json::from_str(l).with_context(|| format!("history line {}", i + 1)))
        .collect()
}
