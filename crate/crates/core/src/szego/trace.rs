//! Grid-based extraction of the multiple Szegő curve.
//!
//! Nodes of a square lattice over `[-1, 1]²` are labelled, every lattice
//! edge with differing end labels is bisected down to the requested
//! tolerance, and crossings are joined cell by cell into polylines.

use super::{phi_label, SzegoStructure};
use crate::error::SzegoError;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet, HashMap};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Arc {
    /// Larger label; its region lies to the left of the direction of travel.
    pub j: usize,
    pub k: usize,
    pub points: Vec<Complex64>,
    pub closed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TriplePoint {
    pub z: Complex64,
    pub labels: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurveSet {
    pub arcs: Vec<Arc>,
    pub triple_points: Vec<TriplePoint>,
    pub grid_resolution: usize,
    pub refine_tol: f64,
}

impl CurveSet {
    pub fn points(&self) -> impl Iterator<Item = &Complex64> {
        self.arcs.iter().flat_map(|a| a.points.iter())
    }

    /// Euclidean distance from `z` to the nearest polyline segment.
    pub fn distance(&self, z: Complex64) -> f64 {
        let mut best = f64::INFINITY;
        for arc in &self.arcs {
            if arc.points.len() == 1 {
                best = best.min((z - arc.points[0]).norm());
            }
            for w in arc.points.windows(2) {
                best = best.min(segment_distance(z, w[0], w[1]));
            }
        }
        best
    }
}

pub fn segment_distance(z: Complex64, p: Complex64, q: Complex64) -> f64 {
    let d = q - p;
    let len2 = d.norm_sqr();
    if len2 == 0.0 {
        return (z - p).norm();
    }
    let t = ((z - p) * d.conj()).re / len2;
    let t = t.clamp(0.0, 1.0);
    (z - (p + d * t)).norm()
}

#[derive(Clone, Copy)]
struct Crossing {
    z: Complex64,
    pair: (usize, usize),
}

struct Lattice {
    g: usize,
    h: f64,
}

impl Lattice {
    fn node(&self, ix: usize, iy: usize) -> Complex64 {
        Complex64::new(-1.0 + self.h * ix as f64, -1.0 + self.h * iy as f64)
    }
    fn h_edge(&self, ix: usize, iy: usize) -> u64 {
        2 * (iy * self.g + ix) as u64
    }
    fn v_edge(&self, ix: usize, iy: usize) -> u64 {
        2 * (iy * self.g + ix) as u64 + 1
    }
    fn junction(&self, cx: usize, cy: usize) -> u64 {
        2 * (self.g * self.g) as u64 + (cy * self.g + cx) as u64
    }
}

fn ordered(a: usize, b: usize) -> (usize, usize) {
    (a.max(b), a.min(b))
}

fn bisect(s: &SzegoStructure, mut p: Complex64, mut q: Complex64, lp: usize, mut lq: usize, tol: f64) -> Crossing {
    while (q - p).norm() > tol {
        let m = (p + q) * 0.5;
        if m == p || m == q {
            break;
        }
        let lm = s.classify(m);
        if lm == lp {
            p = m;
        } else {
            q = m;
            lq = lm;
        }
    }
    Crossing {
        z: (p + q) * 0.5,
        pair: ordered(lp, lq),
    }
}

/// Point where three labels tie, by Newton iteration from `start`.
fn junction_point(s: &SzegoStructure, labels: &[usize; 3], start: Complex64) -> Option<Complex64> {
    let grad = |z: Complex64, l: usize| -> Complex64 {
        if l == 0 {
            z / z.norm_sqr()
        } else {
            s.a(l)
        }
    };
    let mut z = start;
    for _ in 0..50 {
        let f1 = phi_label(z, &s.a, &s.l, labels[0]) - phi_label(z, &s.a, &s.l, labels[1]);
        let f2 = phi_label(z, &s.a, &s.l, labels[0]) - phi_label(z, &s.a, &s.l, labels[2]);
        let g1 = grad(z, labels[0]) - grad(z, labels[1]);
        let g2 = grad(z, labels[0]) - grad(z, labels[2]);
        let det = g1.re * g2.im - g1.im * g2.re;
        if det.abs() < 1e-300 {
            return None;
        }
        let dx = (f1 * g2.im - f2 * g1.im) / det;
        let dy = (g1.re * f2 - g2.re * f1) / det;
        z -= Complex64::new(dx, dy);
        if dx.hypot(dy) < 1e-15 {
            return Some(z);
        }
    }
    None
}

pub fn trace_curve(s: &SzegoStructure, grid: usize, tol: f64) -> Result<CurveSet, SzegoError> {
    let g = grid.max(3);
    let lat = Lattice {
        g,
        h: 2.0 / (g - 1) as f64,
    };
    let labels: Vec<Vec<usize>> = (0..g)
        .into_par_iter()
        .map(|iy| (0..g).map(|ix| s.classify(lat.node(ix, iy))).collect())
        .collect();
    for j in 1..=s.nu() {
        if !labels.iter().flatten().any(|&l| l == j) {
            return Err(SzegoError::NonGeneric {
                index: j,
                reason: format!("region {j} contains no lattice node"),
            });
        }
    }

    let mut edges: Vec<(u64, Complex64, Complex64, usize, usize)> = Vec::new();
    for iy in 0..g {
        for ix in 0..g {
            if ix + 1 < g && labels[iy][ix] != labels[iy][ix + 1] {
                edges.push((
                    lat.h_edge(ix, iy),
                    lat.node(ix, iy),
                    lat.node(ix + 1, iy),
                    labels[iy][ix],
                    labels[iy][ix + 1],
                ));
            }
            if iy + 1 < g && labels[iy][ix] != labels[iy + 1][ix] {
                edges.push((
                    lat.v_edge(ix, iy),
                    lat.node(ix, iy),
                    lat.node(ix, iy + 1),
                    labels[iy][ix],
                    labels[iy + 1][ix],
                ));
            }
        }
    }
    let crossings: HashMap<u64, Crossing> = edges
        .par_iter()
        .map(|&(key, p, q, lp, lq)| (key, bisect(s, p, q, lp, lq, tol)))
        .collect();

    let mut positions: BTreeMap<u64, Complex64> = crossings.iter().map(|(&k, c)| (k, c.z)).collect();
    let mut segments: BTreeMap<(usize, usize), Vec<(u64, u64)>> = BTreeMap::new();
    let mut triple_points = Vec::new();

    for cy in 0..g - 1 {
        for cx in 0..g - 1 {
            let corner = [labels[cy][cx], labels[cy][cx + 1], labels[cy + 1][cx + 1], labels[cy + 1][cx]];
            if corner.iter().all(|&l| l == corner[0]) {
                continue;
            }
            let edge_keys = [
                lat.h_edge(cx, cy),
                lat.v_edge(cx + 1, cy),
                lat.h_edge(cx, cy + 1),
                lat.v_edge(cx, cy),
            ];
            let mut groups: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
            for (e, key) in edge_keys.iter().enumerate() {
                if let Some(c) = crossings.get(key) {
                    groups.entry(c.pair).or_default().push(e);
                }
            }
            let mut dangling: Vec<(usize, (usize, usize))> = Vec::new();
            for (&pair, es) in &groups {
                match es.len() {
                    2 => segments.entry(pair).or_default().push((edge_keys[es[0]], edge_keys[es[1]])),
                    4 => {
                        let centre = lat.node(cx, cy) + Complex64::new(0.5 * lat.h, 0.5 * lat.h);
                        let lc = s.classify(centre);
                        // corner i sits between edges (i + 3) % 4 and i
                        let mut isolated: Vec<usize> = (0..4).filter(|&i| corner[i] != lc).collect();
                        if isolated.len() != 2 {
                            isolated = vec![1, 3];
                        }
                        for i in isolated {
                            segments.entry(pair).or_default().push((edge_keys[(i + 3) % 4], edge_keys[i]));
                        }
                    }
                    _ => dangling.extend(es.iter().map(|&e| (e, pair))),
                }
            }
            if dangling.is_empty() {
                continue;
            }
            let mut tie: BTreeSet<usize> = BTreeSet::new();
            let mut mean = Complex64::new(0.0, 0.0);
            for &(e, pair) in &dangling {
                tie.insert(pair.0);
                tie.insert(pair.1);
                mean += crossings[&edge_keys[e]].z;
            }
            mean /= dangling.len() as f64;
            let tie: Vec<usize> = tie.into_iter().collect();
            let mut z = mean;
            if tie.len() == 3 {
                if let Some(zj) = junction_point(s, &[tie[0], tie[1], tie[2]], mean) {
                    let lo = lat.node(cx, cy) - Complex64::new(lat.h, lat.h);
                    let hi = lat.node(cx, cy) + Complex64::new(2.0 * lat.h, 2.0 * lat.h);
                    if zj.re >= lo.re && zj.re <= hi.re && zj.im >= lo.im && zj.im <= hi.im {
                        z = zj;
                    }
                }
            }
            let jkey = lat.junction(cx, cy);
            positions.insert(jkey, z);
            triple_points.push(TriplePoint { z, labels: tie });
            for (e, pair) in dangling {
                segments.entry(pair).or_default().push((edge_keys[e], jkey));
            }
        }
    }

    let mut arcs = Vec::new();
    for (&(j, k), segs) in &segments {
        for (keys, closed) in assemble(segs) {
            let mut points: Vec<Complex64> = keys.iter().map(|key| positions[key]).collect();
            if points.len() < 3 {
                return Err(SzegoError::DegenerateArc {
                    j,
                    k,
                    points: points.len(),
                });
            }
            if !left_side_is(s, &points, j, lat.h) {
                points.reverse();
            }
            arcs.push(Arc { j, k, points, closed });
        }
    }
    Ok(CurveSet {
        arcs,
        triple_points,
        grid_resolution: g,
        refine_tol: tol,
    })
}

/// Joins undirected segments into maximal polylines; closed loops repeat their first key.
fn assemble(segs: &[(u64, u64)]) -> Vec<(Vec<u64>, bool)> {
    let mut adj: BTreeMap<u64, Vec<u64>> = BTreeMap::new();
    for &(p, q) in segs {
        if p == q {
            continue;
        }
        adj.entry(p).or_default().push(q);
        adj.entry(q).or_default().push(p);
    }
    for v in adj.values_mut() {
        v.sort_unstable();
        v.dedup();
    }
    let mut used: BTreeSet<(u64, u64)> = BTreeSet::new();
    let edge = |p: u64, q: u64| (p.min(q), p.max(q));
    let mut out = Vec::new();
    let starts: Vec<u64> = adj.iter().filter(|(_, v)| v.len() != 2).map(|(&k, _)| k).collect();
    let walk = |start: u64, first: u64, used: &mut BTreeSet<(u64, u64)>| -> Vec<u64> {
        let mut path = vec![start, first];
        used.insert(edge(start, first));
        let mut prev = start;
        let mut cur = first;
        while adj[&cur].len() == 2 && cur != start {
            let next = if adj[&cur][0] == prev { adj[&cur][1] } else { adj[&cur][0] };
            if used.contains(&edge(cur, next)) {
                break;
            }
            used.insert(edge(cur, next));
            path.push(next);
            prev = cur;
            cur = next;
        }
        path
    };
    for &s in &starts {
        for &n in &adj[&s] {
            if !used.contains(&edge(s, n)) {
                out.push((walk(s, n, &mut used), false));
            }
        }
    }
    let keys: Vec<u64> = adj.keys().copied().collect();
    for s in keys {
        for &n in &adj[&s] {
            if !used.contains(&edge(s, n)) {
                let path = walk(s, n, &mut used);
                let closed = path.last() == path.first();
                out.push((path, closed));
            }
        }
    }
    out
}

/// Majority vote over sampled segments on which side region `j` lies.
fn left_side_is(s: &SzegoStructure, points: &[Complex64], j: usize, h: f64) -> bool {
    let nseg = points.len() - 1;
    let samples = nseg.min(16);
    let mut votes = 0i32;
    for t in 0..samples {
        let i = (2 * t + 1) * nseg / (2 * samples);
        let (p, q) = (points[i], points[i + 1]);
        let d = q - p;
        if d.norm() == 0.0 {
            continue;
        }
        let normal = Complex64::i() * d / d.norm();
        let mid = (p + q) * 0.5;
        let step = 0.25 * h;
        if s.classify(mid + normal * step) == j {
            votes += 1;
        } else if s.classify(mid - normal * step) == j {
            votes -= 1;
        }
    }
    votes >= 0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Configuration;

    #[test]
    fn distance_to_segment() {
        let p = Complex64::new(0.0, 0.0);
        let q = Complex64::new(1.0, 0.0);
        assert!((segment_distance(Complex64::new(0.5, 0.3), p, q) - 0.3).abs() < 1e-15);
        assert!((segment_distance(Complex64::new(2.0, 0.0), p, q) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn assemble_open_and_closed() {
        let open = assemble(&[(1, 2), (2, 3), (3, 4)]);
        assert_eq!(open, vec![(vec![1, 2, 3, 4], false)]);
        let closed = assemble(&[(1, 2), (2, 3), (3, 1)]);
        assert_eq!(closed.len(), 1);
        assert!(closed[0].1);
        assert_eq!(closed[0].0.first(), closed[0].0.last());
    }

    #[test]
    fn single_point_curve_is_one_closed_loop() {
        let cfg = Configuration::new(vec![Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0)], vec![1.0], 8, None).unwrap();
        let s = SzegoStructure::solve(&cfg);
        let curve = trace_curve(&s, 101, 1e-10).unwrap();
        assert_eq!(curve.arcs.len(), 1);
        let arc = &curve.arcs[0];
        assert!(arc.closed);
        assert_eq!((arc.j, arc.k), (1, 0));
        // Ω_1 is bounded, so keeping it on the left means counter-clockwise travel
        let area: f64 = arc.points.windows(2).map(|w| (w[0].conj() * w[1]).im).sum::<f64>() / 2.0;
        assert!(area > 0.0);
    }
}
