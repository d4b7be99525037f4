use std::fmt::Write as _;
use std::sync::Arc;

use anyhow::{bail, Context};
use hyperfoam_core::holonomy::{direction_bijection_check, regenerate_table};
use hyperfoam_core::lattice::{Lattice, LatticeOptions, SupernodeId, TorusShape, ToyLattice2D};
use hyperfoam_core::network::{history_jsonl, toy_export, SpinNetwork, EXPORT_SCHEMA_VERSION};
use hyperfoam_core::observables::{
    anisotropy_csv, deflection_csv, geodesic_deflection, sphere_csv, sphere_growth, supernode_frame,
};
use hyperfoam_core::particles::{classify, format_colors, Root8};
use hyperfoam_core::supernode::Variant;
use serde_json::{json, Value};

use crate::io::{write_atomic, write_json};
use crate::script::{self, Skipped};
use crate::{Common, DecodeArgs, EvolveArgs, ExportArgs, ExportFormat, MeasureArgs, Mode, TableFormat};

const SCHEMA: u32 = EXPORT_SCHEMA_VERSION;

fn mode_name(m: Mode) -> &'static str {
    match m {
        Mode::F4 => "f4",
        Mode::D4Toy => "d4-toy",
        Mode::Toy2d => "2d-toy",
    }
}

fn lattice(c: &Common) -> anyhow::Result<Lattice> {
    let variant = match c.mode {
        Mode::F4 => Variant::F4,
        Mode::D4Toy => Variant::D4,
        Mode::Toy2d => bail!("mode 2d-toy has no 4D lattice; use --mode f4 or d4-toy"),
    };
    Ok(Lattice::build(TorusShape::new(c.n), variant, LatticeOptions { multigraph: c.multigraph })?)
}

fn network(c: &Common) -> anyhow::Result<SpinNetwork> {
    let net = SpinNetwork::assemble(Arc::new(lattice(c)?))?;
    anyhow::ensure!(net.check_trivalent(), "assembled network is not 3-regular");
    Ok(net)
}

fn toy(c: &Common) -> anyhow::Result<ToyLattice2D> {
    Ok(ToyLattice2D::new(c.m)?)
}

pub fn build(c: &Common) -> anyhow::Result<()> {
    let manifest = if c.mode == Mode::Toy2d {
        let t = toy(c)?;
        write_json(&c.out.join("toy.json"), &toy_export(&t))?;
        json!({
            "schema_version": SCHEMA,
            "mode": mode_name(c.mode),
            "m": c.m,
            "dual_nodes": t.site_count(),
            "edges": t.site_count() * 3 / 2,
        })
    } else {
        let net = network(c)?;
        let bijection = direction_bijection_check();
        anyhow::ensure!(bijection, "leaf directions do not biject onto the two shells");
        write_atomic(&c.out.join("graph.json"), net.to_json().as_bytes())?;
        json!({
            "schema_version": SCHEMA,
            "mode": mode_name(c.mode),
            "n": c.n,
            "multigraph": c.multigraph,
            "supernodes": net.lattice().supernode_count(),
            "nodes": net.node_count(),
            "edges": net.edge_count(),
            "internal_edges": net.internal_edges().len(),
            "superlinks": net.superlink_count(),
            "direction_bijection": bijection,
            "trivalent": true,
            "state_hash": net.state_hash(),
        })
    };
    write_json(&c.out.join("manifest.json"), &manifest)?;
    println!("{}", serde_json::to_string(&manifest)?);
    Ok(())
}

pub fn table(format: TableFormat) -> anyhow::Result<()> {
    let rows = regenerate_table();
    let mut s = String::new();
    match format {
        TableFormat::Csv => {
            s.push_str("K,w,x,y,z,omega,axis,modulus2,d0,d1,d2,d3\n");
            for r in &rows {
                let [d0, d1, d2, d3] = r.direction;
                let _ = writeln!(
                    s,
                    "{},{},{},{},{},{},{},{},{d0},{d1},{d2},{d3}",
                    r.k, r.zeta[0], r.zeta[1], r.zeta[2], r.zeta[3], r.omega, r.axis, r.modulus2
                );
            }
        }
        TableFormat::Md => {
            s.push_str("| K | w | x | y | z | ω | axis | \\|d\\|² | direction |\n");
            s.push_str("|---|---|---|---|---|---|---|---|---|\n");
            for r in &rows {
                let d = r.direction.map(|x| x.to_string()).join(", ");
                let _ = writeln!(
                    s,
                    "| {} | {} | {} | {} | {} | {} | {} | {} | ({d}) |",
                    r.k, r.zeta[0], r.zeta[1], r.zeta[2], r.zeta[3], r.omega, r.axis, r.modulus2
                );
            }
        }
    }
    print!("{s}");
    Ok(())
}

pub fn evolve(a: &EvolveArgs) -> anyhow::Result<()> {
    let c = &a.common;
    let mut net = network(c)?;
    let pristine = net.state_hash();
    let mut skipped: Vec<Skipped> = Vec::new();
    if let Some(path) = &a.replay {
        let events = script::load_history(path)?;
        net = SpinNetwork::replay(Arc::new(net.lattice().clone()), &events).context("replaying history")?;
    } else {
        if let Some(path) = &a.script {
            let steps = script::load(path)?;
            skipped = script::run(&mut net, &steps, a.skip_illegal)?;
        }
        if a.random_moves > 0 {
            net.random_moves(a.random_moves, c.seed);
        }
    }
    anyhow::ensure!(net.check_trivalent(), "network lost 3-regularity during evolution");
    write_atomic(&c.out.join("history.jsonl"), history_jsonl(net.history()).as_bytes())?;
    let state = json!({
        "schema_version": SCHEMA,
        "mode": mode_name(c.mode),
        "n": c.n,
        "seed": c.seed,
        "events": net.history().len(),
        "revision": net.revision(),
        "pristine_hash": pristine,
        "state_hash": net.state_hash(),
        "skipped": skipped,
    });
    write_json(&c.out.join("final_state.json"), &state)?;
    for s in &skipped {
        eprintln!("skipped {}: {}", s.at, s.reason);
    }
    println!("{}", net.state_hash());
    Ok(())
}

pub fn measure(a: &MeasureArgs) -> anyhow::Result<()> {
    let c = &a.common;
    if !(a.sphere || a.deflection || a.anisotropy) {
        bail!("nothing to measure: pass --sphere, --deflection and/or --anisotropy");
    }
    let mut summary = serde_json::Map::new();
    summary.insert("schema_version".into(), json!(SCHEMA));
    summary.insert("mode".into(), json!(mode_name(c.mode)));

    if a.sphere {
        let lat = lattice(c)?;
        let rmax = a.rmax.unwrap_or((c.n as usize / 2).max(2));
        let s = sphere_growth(&lat, SupernodeId(0), rmax);
        write_atomic(&c.out.join("sphere.csv"), sphere_csv(&s).as_bytes())?;
        summary.insert(
            "sphere".into(),
            json!({
                "n": c.n,
                "rmax": rmax,
                "ball": s.ball,
                "fit_from": s.fit_from,
                "fit_to": s.fit_to,
                "slope": s.slope,
            }),
        );
    }
    if a.deflection {
        let t = toy(c)?;
        if let Some(&bad) = a.defects.iter().find(|&&d| d >= t.site_count()) {
            bail!("defect {bad} is outside the {} toy sites", t.site_count());
        }
        let r = geodesic_deflection(&t, &a.defects);
        write_atomic(&c.out.join("deflection.csv"), deflection_csv(&r).as_bytes())?;
        summary.insert(
            "deflection".into(),
            json!({
                "m": r.m,
                "defects": r.defects,
                "pairs_compared": r.pairs_compared,
                "changed_pairs": r.changed.len(),
                "max_abs_delta_hops": r.max_abs_delta.to_string(),
                "locality_radius": r.locality_radius,
                "unchanged_beyond_radius": r.unchanged_beyond_radius,
            }),
        );
        anyhow::ensure!(r.unchanged_beyond_radius, "distance changes found beyond the locality radius");
    }
    if a.anisotropy {
        let mut net = network(c)?;
        if let Some(path) = &a.script {
            script::run(&mut net, &script::load(path)?, false)?;
        }
        write_atomic(&c.out.join("anisotropy.csv"), anisotropy_csv(&net).as_bytes())?;
        let (mut worst, mut worst_at, mut bent) = (None, 0u32, 0usize);
        for sn in 0..net.lattice().supernode_count() as u32 {
            let an = supernode_frame(&net, sn).anisotropy();
            if an != 0.into() {
                bent += 1;
            }
            if worst.is_none_or(|w| an > w) {
                worst = Some(an);
                worst_at = sn;
            }
        }
        summary.insert(
            "anisotropy".into(),
            json!({
                "supernodes": net.lattice().supernode_count(),
                "anisotropic_supernodes": bent,
                "max": worst.map(|w| w.to_string()),
                "max_at": worst_at,
                "state_hash": net.state_hash(),
            }),
        );
    }
    let summary = Value::Object(summary);
    write_json(&c.out.join("summary.json"), &summary)?;
    println!("{}", serde_json::to_string(&summary)?);
    Ok(())
}

fn roots_from_value(v: &Value) -> anyhow::Result<Vec<Root8>> {
    let list = match v {
        Value::Array(a) => a.clone(),
        Value::Object(o) => match o.get("roots") {
            Some(Value::Array(a)) => a.clone(),
            _ => bail!("expected a list of roots or an object with a `roots` list"),
        },
        _ => bail!("expected a list of roots"),
    };
    list.iter()
        .enumerate()
        .map(|(i, item)| {
            let r = item.get("root").unwrap_or(item);
            serde_json::from_value::<Root8>(r.clone()).with_context(|| format!("root {}: need 8 integers", i + 1))
        })
        .collect()
}

pub fn decode(a: &DecodeArgs) -> anyhow::Result<()> {
    let mut roots = Vec::new();
    if let Some(path) = &a.file {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        roots.extend(roots_from_value(&serde_json::from_str(&text)?)?);
    }
    if a.coords.len() % 8 != 0 {
        bail!("got {} coordinates; roots have 8 each", a.coords.len());
    }
    roots.extend(a.coords.chunks(8).map(|c| Root8(c.try_into().expect("chunk of 8"))));
    if roots.is_empty() {
        bail!("no roots given: pass coordinates after `--` or use --file");
    }
    for r in roots {
        let p = classify(r)?;
        let label = if p.from_fixture { p.label.as_str() } else { "unlisted" };
        println!("charge={} colors={} label={label}", p.charge, format_colors(&p.colors));
        if let Some(note) = &p.note {
            println!("  note: {note}");
        }
    }
    Ok(())
}

fn toy_dot(t: &ToyLattice2D) -> String {
    let mut s = String::from("graph toy {\n  node [shape=circle, label=\"\"];\n");
    for u in 0..t.site_count() {
        let (r, c) = t.row_col(u);
        let fill = if t.bit(u) == 1 { "black" } else { "white" };
        let _ = writeln!(s, "  s{u} [style=filled, fillcolor={fill}, pos=\"{c},{r}!\"];");
    }
    for u in 0..t.site_count() {
        for &v in t.dual_neighbors(u) {
            if v > u {
                let _ = writeln!(s, "  s{u} -- s{v};");
            }
        }
    }
    s.push_str("}\n");
    s
}

pub fn export(a: &ExportArgs) -> anyhow::Result<()> {
    let c = &a.common;
    let format = if a.dot { ExportFormat::Dot } else { a.format };
    let (name, body) = match (c.mode, format) {
        (Mode::Toy2d, ExportFormat::Json) => ("toy.json", serde_json::to_string_pretty(&toy_export(&toy(c)?))? + "\n"),
        (Mode::Toy2d, ExportFormat::Dot) => ("toy.dot", toy_dot(&toy(c)?)),
        (_, ExportFormat::Json) => ("graph.json", network(c)?.to_json()),
        (_, ExportFormat::Dot) => ("graph.dot", network(c)?.to_dot()),
    };
    let path = c.out.join(name);
    write_atomic(&path, body.as_bytes())?;
    println!("{}", path.display());
    Ok(())
}
