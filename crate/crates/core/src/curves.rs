//! Chain curves on Σ_g as a 4-valent graph with a rotation system.
//!
//! Every transverse double point carries four darts (the outgoing and
//! incoming ends of both curves through it) in a cyclic order. An edge
//! joins the outgoing dart at one visit of a curve to the incoming dart at
//! its next visit. Faces of the embedding are the orbits of
//! `dart ↦ rotate(partner(dart))`.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::words::{CurveId, SurfaceSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DartDir {
    Out,
    In,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DartLabel {
    pub curve: CurveId,
    pub dir: DartDir,
}

impl DartLabel {
    pub fn out(curve: CurveId) -> Self {
        Self {
            curve,
            dir: DartDir::Out,
        }
    }

    pub fn inn(curve: CurveId) -> Self {
        Self {
            curve,
            dir: DartDir::In,
        }
    }
}

/// A transverse double point of two distinct curves.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Crossing {
    pub curves: (CurveId, CurveId),
    /// Cyclic order of the four darts around the vertex.
    pub rotation: [DartLabel; 4],
}

/// Cyclic order in which a curve passes through vertices; empty for a curve
/// meeting nothing else.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveRoute {
    pub curve: CurveId,
    pub visits: Vec<usize>,
}

/// Sense of the rotation at a chain vertex `a_i ∩ a(i+1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Handedness {
    /// `(a_i out, a(i+1) out, a_i in, a(i+1) in)`
    Canonical,
    /// The reversed cyclic order.
    Mirrored,
}

impl Handedness {
    fn rotation(self, lo: CurveId, hi: CurveId) -> [DartLabel; 4] {
        match self {
            Handedness::Canonical => [
                DartLabel::out(lo),
                DartLabel::out(hi),
                DartLabel::inn(lo),
                DartLabel::inn(hi),
            ],
            Handedness::Mirrored => [
                DartLabel::out(lo),
                DartLabel::inn(hi),
                DartLabel::inn(lo),
                DartLabel::out(hi),
            ],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EmbeddedCurveSystem {
    surface: SurfaceSpec,
    curves: Vec<CurveId>,
    routes: Vec<CurveRoute>,
    vertices: Vec<Crossing>,
    /// Uniform handedness for chain-built systems.
    handedness: Option<Handedness>,
    #[serde(skip)]
    partner: Vec<usize>,
}

impl EmbeddedCurveSystem {
    /// Assembles and validates a system from routes and crossings.
    pub fn new(
        surface: SurfaceSpec,
        routes: Vec<CurveRoute>,
        vertices: Vec<Crossing>,
    ) -> Result<Self> {
        let bad = |msg: String| Error::MalformedSystem(msg);
        if routes.is_empty() {
            return Err(Error::EmptyCurveSet);
        }
        let mut curves: Vec<CurveId> = routes.iter().map(|r| r.curve).collect();
        curves.sort();
        if curves.windows(2).any(|w| w[0] == w[1]) {
            return Err(bad("a curve has two routes".into()));
        }
        for &c in &curves {
            surface.curve(c.index())?;
        }

        for (v, x) in vertices.iter().enumerate() {
            let (c1, c2) = x.curves;
            if c1 == c2 {
                return Err(bad(format!("vertex {v} is a self-crossing")));
            }
            let expected: BTreeSet<(u32, bool)> = [c1, c2]
                .iter()
                .flat_map(|c| [(c.index(), true), (c.index(), false)])
                .collect();
            let present: BTreeSet<(u32, bool)> = x
                .rotation
                .iter()
                .map(|d| (d.curve.index(), d.dir == DartDir::Out))
                .collect();
            if present != expected {
                return Err(bad(format!(
                    "vertex {v} does not carry the four darts of its curves"
                )));
            }
            for k in 0..4 {
                if x.rotation[k].curve == x.rotation[(k + 1) % 4].curve {
                    return Err(bad(format!("darts at vertex {v} do not alternate")));
                }
            }
        }

        // Each vertex is visited exactly once by each of its two curves.
        let mut seen = vec![Vec::<CurveId>::new(); vertices.len()];
        for r in &routes {
            for &v in &r.visits {
                let x = vertices
                    .get(v)
                    .ok_or_else(|| bad(format!("route of {} names missing vertex {v}", r.curve)))?;
                if x.curves.0 != r.curve && x.curves.1 != r.curve {
                    return Err(bad(format!(
                        "{} visits vertex {v} which it does not cross",
                        r.curve
                    )));
                }
                if seen[v].contains(&r.curve) {
                    return Err(bad(format!("{} visits vertex {v} twice", r.curve)));
                }
                seen[v].push(r.curve);
            }
        }
        if let Some(v) = seen.iter().position(|s| s.len() != 2) {
            return Err(bad(format!(
                "vertex {v} is not visited by both of its curves"
            )));
        }

        let dart_at = |v: usize, label: DartLabel| -> usize {
            let slot = vertices[v]
                .rotation
                .iter()
                .position(|&d| d == label)
                .expect("validated rotation");
            4 * v + slot
        };
        let mut partner = vec![usize::MAX; 4 * vertices.len()];
        for r in &routes {
            let k = r.visits.len();
            for j in 0..k {
                let from = dart_at(r.visits[j], DartLabel::out(r.curve));
                let to = dart_at(r.visits[(j + 1) % k], DartLabel::inn(r.curve));
                partner[from] = to;
                partner[to] = from;
            }
        }
        if partner.contains(&usize::MAX) {
            return Err(bad("dart left without an edge".into()));
        }

        Ok(Self {
            surface,
            curves,
            routes,
            vertices,
            handedness: None,
            partner,
        })
    }

    pub fn surface(&self) -> SurfaceSpec {
        self.surface
    }

    pub fn curves(&self) -> &[CurveId] {
        &self.curves
    }

    pub fn vertices(&self) -> &[Crossing] {
        &self.vertices
    }

    pub fn routes(&self) -> &[CurveRoute] {
        &self.routes
    }

    pub fn handedness(&self) -> Option<Handedness> {
        self.handedness
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    /// Each curve contributes one edge per visit.
    pub fn edge_count(&self) -> usize {
        self.routes.iter().map(|r| r.visits.len()).sum()
    }

    /// Curves that meet no other curve of the system.
    pub fn isolated_curves(&self) -> Vec<CurveId> {
        self.routes
            .iter()
            .filter(|r| r.visits.is_empty())
            .map(|r| r.curve)
            .collect()
    }

    /// Number of vertices where `a` and `b` cross.
    pub fn crossings_between(&self, a: CurveId, b: CurveId) -> usize {
        self.vertices
            .iter()
            .filter(|x| x.curves == (a, b) || x.curves == (b, a))
            .count()
    }

    fn rotate(&self, dart: usize) -> usize {
        4 * (dart / 4) + (dart % 4 + 1) % 4
    }

    fn faces(&self) -> Vec<Vec<usize>> {
        let n = self.partner.len();
        let mut visited = vec![false; n];
        let mut faces = Vec::new();
        for start in 0..n {
            if visited[start] {
                continue;
            }
            let mut face = Vec::new();
            let mut d = start;
            while !visited[d] {
                visited[d] = true;
                face.push(d);
                d = self.rotate(self.partner[d]);
            }
            faces.push(face);
        }
        faces
    }

    fn is_connected(&self) -> bool {
        let v = self.vertices.len();
        if v == 0 || !self.isolated_curves().is_empty() {
            return false;
        }
        let mut parent: Vec<usize> = (0..v).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for (d, &e) in self.partner.iter().enumerate() {
            let (a, b) = (find(&mut parent, d / 4), find(&mut parent, e / 4));
            parent[a] = b;
        }
        let root = find(&mut parent, 0);
        (0..v).all(|x| find(&mut parent, x) == root)
    }
}

/// The standard chain system on the given indices with one handedness at
/// every vertex.
pub fn build_chain_system(g: u32, indices: &[u32]) -> Result<EmbeddedCurveSystem> {
    build_chain_system_with(g, indices, Handedness::Canonical)
}

pub fn build_chain_system_with(
    g: u32,
    indices: &[u32],
    handedness: Handedness,
) -> Result<EmbeddedCurveSystem> {
    let count = chain_vertex_count(indices);
    let mut sys = chain_system_per_vertex(g, indices, &vec![handedness; count])?;
    sys.handedness = Some(handedness);
    Ok(sys)
}

fn chain_vertex_count(indices: &[u32]) -> usize {
    let set: BTreeSet<u32> = indices.iter().copied().collect();
    set.iter().filter(|&&i| set.contains(&(i + 1))).count()
}

/// Chain system with an independent handedness at each vertex, in order of
/// increasing lower curve index.
pub fn chain_system_per_vertex(
    g: u32,
    indices: &[u32],
    handedness: &[Handedness],
) -> Result<EmbeddedCurveSystem> {
    let surface = SurfaceSpec::closed(g)?;
    if indices.is_empty() {
        return Err(Error::EmptyCurveSet);
    }
    let set: BTreeSet<u32> = indices.iter().copied().collect();
    for &i in &set {
        surface.curve(i)?;
    }
    let mut vertices = Vec::new();
    let mut vertex_of_pair = std::collections::BTreeMap::new();
    for &i in &set {
        if set.contains(&(i + 1)) {
            let (lo, hi) = (CurveId::unchecked(i), CurveId::unchecked(i + 1));
            let h = *handedness
                .get(vertices.len())
                .ok_or_else(|| Error::MalformedSystem("not enough handedness choices".into()))?;
            vertex_of_pair.insert(i, vertices.len());
            vertices.push(Crossing {
                curves: (lo, hi),
                rotation: h.rotation(lo, hi),
            });
        }
    }
    if handedness.len() != vertices.len() {
        return Err(Error::MalformedSystem(format!(
            "{} handedness choices for {} vertices",
            handedness.len(),
            vertices.len()
        )));
    }
    let routes = set
        .iter()
        .map(|&i| {
            let mut visits = Vec::new();
            if let Some(&v) = i.checked_sub(1).and_then(|p| vertex_of_pair.get(&p)) {
                visits.push(v);
            }
            if let Some(&v) = vertex_of_pair.get(&i) {
                visits.push(v);
            }
            CurveRoute {
                curve: CurveId::unchecked(i),
                visits,
            }
        })
        .collect();
    EmbeddedCurveSystem::new(surface, routes, vertices)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FaceReport {
    pub faces: usize,
    pub sizes: Vec<usize>,
    pub connected: bool,
    pub euler: i64,
    pub vertices: usize,
    pub edges: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub handedness: Option<Handedness>,
}

/// Traces every face of a system with at least one vertex.
pub fn trace_faces(sys: &EmbeddedCurveSystem) -> Result<FaceReport> {
    if sys.vertex_count() == 0 {
        return Err(Error::MalformedSystem("no vertices to trace".into()));
    }
    let faces = sys.faces();
    let sizes: Vec<usize> = faces.iter().map(Vec::len).collect();
    if sizes.iter().sum::<usize>() != 4 * sys.vertex_count() {
        return Err(Error::MalformedSystem(
            "darts not partitioned into faces".into(),
        ));
    }
    let (v, e, f) = (sys.vertex_count(), sys.edge_count(), faces.len());
    Ok(FaceReport {
        faces: f,
        sizes,
        connected: sys.is_connected(),
        euler: v as i64 - e as i64 + f as i64,
        vertices: v,
        edges: e,
        handedness: sys.handedness(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FillingReport {
    pub fills: bool,
    pub disk_count: Option<usize>,
}

/// The curves fill Σ_g when their union is connected and every
/// complementary region is a disk, i.e. the traced surface has Euler
/// characteristic `2 − 2g`.
pub fn check_filling(sys: &EmbeddedCurveSystem) -> FillingReport {
    let no = FillingReport {
        fills: false,
        disk_count: None,
    };
    if sys.vertex_count() == 0 || !sys.isolated_curves().is_empty() {
        return no;
    }
    let Ok(report) = trace_faces(sys) else {
        return no;
    };
    let target = 2 - 2 * i64::from(sys.surface().genus());
    if report.connected && report.euler == target {
        FillingReport {
            fills: true,
            disk_count: Some(report.faces),
        }
    } else {
        no
    }
}

/// A face bounded by two arcs, listed by its corner vertices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Bigon {
    pub corners: [usize; 2],
}

pub fn bigon_scan(sys: &EmbeddedCurveSystem) -> Vec<Bigon> {
    sys.faces()
        .into_iter()
        .filter(|f| f.len() == 2)
        .map(|f| Bigon {
            corners: [f[0] / 4, f[1] / 4],
        })
        .collect()
}
