use patcal::decompose::*;
use patcal::derivability::*;
use patcal::geometry::GroupSpec;
use patcal::num::Q;
use patcal::pattern::{PatternKind, SpaceSpec};
use patcal::synthesis::*;
use patcal::voronoi::delone_parameters;
use std::time::Instant;

fn main() {
    let group = GroupSpec::translations(2);
    let p = checkerboard_pattern(2, group.clone());
    let t = Instant::now();
    let (d, ld) = anchor_delone_set(&p).unwrap();
    println!("anchor set: {:?}", t.elapsed());
    let t = Instant::now();
    let params = delone_parameters(&d).unwrap();
    println!("params: {:?} (cover bound {})", t.elapsed(), params.covering_bound);
    let r0 = decomposition_radius(&p, &params, &ld);
    println!("R0 = {} ~ {:.3}", r0, r0.to_f64());
    let t = Instant::now();
    let v = check_decomposes(&p, &d, &r0).unwrap();
    println!("check_decomposes: {:?} pass={}", t.elapsed(), v.is_pass());
    let t = Instant::now();
    let dec = components_and_plan(&p, &d, &r0).unwrap();
    println!("components_and_plan: {:?} ({} classes)", t.elapsed(), dec.components.len());
    let t = Instant::now();
    let w = plan_mld_witness(&dec, &p).unwrap();
    println!("plan witness build: {:?}", t.elapsed());
    let t = Instant::now();
    let verdict = verify_mld_witness(&w, &p, &dec.plan, None).unwrap();
    println!("plan witness verify: {:?} pass={}", t.elapsed(), verdict.is_pass());
    let t = Instant::now();
    let target = SpaceSpec::new(PatternKind::PointSet, group);
    let blocks = build_marked_blocks(&target, &dec.stabilizers, &(&params.min_sep_lower * Q::ratio(1,5))).unwrap();
    println!("marked blocks: {:?}", t.elapsed());
    let _ = blocks;
    let t = Instant::now();
    let result = synthesize_delone(&p, &target).unwrap();
    println!("full synthesis: {:?}", t.elapsed());
    let t = Instant::now();
    let v = verify_mld_witness(&result.witness, &p, &result.pattern, None).unwrap();
    println!("composite verify: {:?} pass={}", t.elapsed(), v.is_pass());
}
