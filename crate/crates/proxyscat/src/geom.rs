//! Boundary geometry: parametrized scatterer shapes (ellipses and
//! star-shaped ellipses), rectangular proxy surfaces with composite
//! Gauss-Legendre panels, and the lattice generators used by the shipped
//! experiment configurations.

use crate::error::{Error, Result};
use crate::linalg::Lcg;

/// Point or vector in the plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn dot(self, o: Point) -> f64 {
        self.x * o.x + self.y * o.y
    }

    pub fn norm(self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn dist(self, o: Point) -> f64 {
        (self - o).norm()
    }
}

impl std::ops::Add for Point {
    type Output = Point;
    fn add(self, o: Point) -> Point {
        Point::new(self.x + o.x, self.y + o.y)
    }
}

impl std::ops::Sub for Point {
    type Output = Point;
    fn sub(self, o: Point) -> Point {
        Point::new(self.x - o.x, self.y - o.y)
    }
}

impl std::ops::Mul<f64> for Point {
    type Output = Point;
    fn mul(self, s: f64) -> Point {
        Point::new(self.x * s, self.y * s)
    }
}

/// Scatterer boundary shape.
///
/// `Ellipse`: (a cos t + c1, b sin t + c2).
/// `StarEllipse`: c + r(t) (a cos t, b sin t) with
/// r(t) = 1 + amplitude cos(frequency t).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ShapeKind {
    Ellipse,
    StarEllipse,
}

#[derive(Debug, Clone, Copy)]
pub struct ShapeSpec {
    pub kind: ShapeKind,
    pub a: f64,
    pub b: f64,
    pub center: Point,
    pub star_amplitude: f64,
    pub star_frequency: u32,
}

impl ShapeSpec {
    pub fn ellipse(a: f64, b: f64, center: Point) -> Self {
        Self { kind: ShapeKind::Ellipse, a, b, center, star_amplitude: 0.0, star_frequency: 0 }
    }

    /// Star-shaped ellipse with the standard bump r(t) = 1 + 0.1 cos(7t).
    pub fn star_ellipse(a: f64, b: f64, center: Point) -> Self {
        Self { kind: ShapeKind::StarEllipse, a, b, center, star_amplitude: 0.1, star_frequency: 7 }
    }

    pub fn validate(&self) -> Result<()> {
        if self.a <= 0.0 || self.b <= 0.0 {
            return Err(Error::Config(format!("shape semi-axes must be positive: {self:?}")));
        }
        if self.star_amplitude.abs() >= 1.0 {
            return Err(Error::Config("star amplitude must satisfy |amp| < 1".into()));
        }
        Ok(())
    }

    fn radial(&self, t: f64) -> (f64, f64, f64) {
        match self.kind {
            ShapeKind::Ellipse => (1.0, 0.0, 0.0),
            ShapeKind::StarEllipse => {
                let m = self.star_frequency as f64;
                let r = 1.0 + self.star_amplitude * (m * t).cos();
                let dr = -self.star_amplitude * m * (m * t).sin();
                let ddr = -self.star_amplitude * m * m * (m * t).cos();
                (r, dr, ddr)
            }
        }
    }

    /// Position at parameter t in [0, 2 pi).
    pub fn point(&self, t: f64) -> Point {
        let (r, _, _) = self.radial(t);
        self.center + Point::new(r * self.a * t.cos(), r * self.b * t.sin())
    }

    /// First derivative with respect to t.
    pub fn derivative(&self, t: f64) -> Point {
        let (r, dr, _) = self.radial(t);
        let (c, s) = (t.cos(), t.sin());
        Point::new(self.a * (dr * c - r * s), self.b * (dr * s + r * c))
    }

    /// Second derivative with respect to t.
    pub fn second_derivative(&self, t: f64) -> Point {
        let (r, dr, ddr) = self.radial(t);
        let (c, s) = (t.cos(), t.sin());
        Point::new(
            self.a * (ddr * c - 2.0 * dr * s - r * c),
            self.b * (ddr * s + 2.0 * dr * c - r * s),
        )
    }

    /// Half-extents of the bounding box around the center.
    pub fn half_extents(&self) -> (f64, f64) {
        match self.kind {
            ShapeKind::Ellipse => (self.a, self.b),
            ShapeKind::StarEllipse => {
                let mut hx = 0.0_f64;
                let mut hy = 0.0_f64;
                let n = 4096;
                for j in 0..n {
                    let t = 2.0 * std::f64::consts::PI * j as f64 / n as f64;
                    let p = self.point(t) - self.center;
                    hx = hx.max(p.x.abs());
                    hy = hy.max(p.y.abs());
                }
                (hx, hy)
            }
        }
    }

    /// True if p lies strictly inside the curve.
    pub fn contains(&self, p: Point) -> bool {
        let u = (p.x - self.center.x) / self.a;
        let v = (p.y - self.center.y) / self.b;
        let s = (u * u + v * v).sqrt();
        let t = v.atan2(u);
        let (r, _, _) = self.radial(t);
        s < r
    }

    pub fn translated(&self, shift: Point) -> Self {
        let mut s = *self;
        s.center = s.center + shift;
        s
    }

    /// Hash of everything except the center; congruent shapes share it.
    pub fn congruence_key(&self) -> u64 {
        let mut h = Hasher::new();
        h.mix(match self.kind {
            ShapeKind::Ellipse => 1,
            ShapeKind::StarEllipse => 2,
        });
        h.mix(self.a.to_bits());
        h.mix(self.b.to_bits());
        h.mix(self.star_amplitude.to_bits());
        h.mix(self.star_frequency as u64);
        h.value()
    }
}

/// Rectangular proxy surface with composite Gauss-Legendre panels.
#[derive(Debug, Clone, Copy)]
pub struct RectProxySpec {
    pub center: Point,
    pub width: f64,
    pub height: f64,
    pub panels_horizontal: usize,
    pub panels_vertical: usize,
    pub panel_order: usize,
}

impl RectProxySpec {
    pub fn validate(&self) -> Result<()> {
        if self.width <= 0.0 || self.height <= 0.0 {
            return Err(Error::Config(format!(
                "proxy sides must be positive: {} x {}",
                self.width, self.height
            )));
        }
        if self.panels_horizontal < 1 || self.panels_vertical < 1 {
            return Err(Error::Config("at least one panel per side".into()));
        }
        if !(4..=32).contains(&self.panel_order) {
            return Err(Error::Config(format!(
                "panel order must lie in [4, 32], got {}",
                self.panel_order
            )));
        }
        Ok(())
    }

    /// Total node count 2 * order * (panels_h + panels_v).
    pub fn node_count(&self) -> usize {
        2 * self.panel_order * (self.panels_horizontal + self.panels_vertical)
    }

    pub fn contains(&self, p: Point) -> bool {
        (p.x - self.center.x).abs() < 0.5 * self.width
            && (p.y - self.center.y).abs() < 0.5 * self.height
    }

    pub fn translated(&self, shift: Point) -> Self {
        let mut s = *self;
        s.center = s.center + shift;
        s
    }

    /// Shortest distance between two axis-aligned rectangles (0 if they
    /// touch or overlap).
    pub fn distance(&self, other: &RectProxySpec) -> f64 {
        let dx = (self.center.x - other.center.x).abs() - 0.5 * (self.width + other.width);
        let dy = (self.center.y - other.center.y).abs() - 0.5 * (self.height + other.height);
        (dx.max(0.0).powi(2) + dy.max(0.0).powi(2)).sqrt()
    }

    /// Hash of the rectangle dimensions and panel layout (not the center).
    pub fn congruence_key(&self) -> u64 {
        let mut h = Hasher::new();
        h.mix(self.width.to_bits());
        h.mix(self.height.to_bits());
        h.mix(self.panels_horizontal as u64);
        h.mix(self.panels_vertical as u64);
        h.mix(self.panel_order as u64);
        h.value()
    }
}

/// Pick panel counts so the node total reaches at least `np_target`,
/// distributing panels in proportion to the side lengths.
pub fn panels_for_target(width: f64, height: f64, order: usize, np_target: usize) -> (usize, usize) {
    let per_loop = 2 * order;
    let loops = np_target.div_ceil(per_loop).max(2);
    // split `loops` panels between one horizontal and one vertical side
    let frac_v = height / (width + height);
    let pv = ((loops as f64) * frac_v).round().max(1.0) as usize;
    let ph = (loops - pv.min(loops - 1)).max(1);
    (ph, pv)
}

/// Curvature data carried by spectrally discretized scatterer boundaries;
/// needed by the singular self-interaction quadrature.
#[derive(Debug, Clone)]
pub struct KressData {
    pub dx: Vec<Point>,
    pub ddx: Vec<Point>,
}

/// Panel layout of a proxy discretization, in the arclength coordinate.
#[derive(Debug, Clone)]
pub struct GlPanels {
    pub order: usize,
    /// panel breakpoints, length n_panels + 1, from 0 to the perimeter
    pub breaks: Vec<f64>,
}

/// Quadrature nodes, outward unit normals and speed-weighted weights for a
/// closed boundary.
#[derive(Debug, Clone)]
pub struct DiscretizedCurve {
    pub nodes: Vec<Point>,
    pub normals: Vec<Point>,
    pub weights: Vec<f64>,
    pub params: Vec<f64>,
    pub closed: bool,
    pub kress: Option<KressData>,
    pub gl_panels: Option<GlPanels>,
}

impl DiscretizedCurve {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn perimeter_estimate(&self) -> f64 {
        self.weights.iter().sum()
    }

    pub fn min_distance_to(&self, other: &DiscretizedCurve) -> f64 {
        let mut d = f64::INFINITY;
        for a in &self.nodes {
            for b in &other.nodes {
                d = d.min(a.dist(*b));
            }
        }
        d
    }

    pub fn translated(&self, shift: Point) -> Self {
        let mut c = self.clone();
        for n in &mut c.nodes {
            *n = *n + shift;
        }
        c
    }
}

/// Global equispaced trapezoid discretization of a smooth closed scatterer
/// boundary. `n` must be even: the singular self-interaction rule pairs
/// nodes across the diagonal.
pub fn discretize_scatterer(spec: &ShapeSpec, n: usize) -> Result<DiscretizedCurve> {
    spec.validate()?;
    if n < 16 || n % 2 != 0 {
        return Err(Error::Config(format!("scatterer node count must be even and >= 16, got {n}")));
    }
    let h = 2.0 * std::f64::consts::PI / n as f64;
    let mut nodes = Vec::with_capacity(n);
    let mut normals = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    let mut params = Vec::with_capacity(n);
    let mut dx = Vec::with_capacity(n);
    let mut ddx = Vec::with_capacity(n);
    for j in 0..n {
        let t = h * j as f64;
        let p = spec.point(t);
        let d = spec.derivative(t);
        let speed = d.norm();
        nodes.push(p);
        normals.push(Point::new(d.y / speed, -d.x / speed));
        weights.push(h * speed);
        params.push(t);
        dx.push(d);
        ddx.push(spec.second_derivative(t));
    }
    Ok(DiscretizedCurve {
        nodes,
        normals,
        weights,
        params,
        closed: true,
        kress: Some(KressData { dx, ddx }),
        gl_panels: None,
    })
}

/// Composite Gauss-Legendre discretization of a rectangular proxy surface,
/// counterclockwise, outward normals constant per side. No node falls on a
/// corner (Gauss nodes are interior to their panels).
pub fn discretize_proxy(spec: &RectProxySpec) -> Result<DiscretizedCurve> {
    spec.validate()?;
    let (gl_x, gl_w) = gauss_legendre(spec.panel_order);
    let w2 = 0.5 * spec.width;
    let h2 = 0.5 * spec.height;
    // sides counterclockwise from the bottom-left corner, in local coords
    struct Side {
        start: Point,
        dir: Point,
        len: f64,
        normal: Point,
        panels: usize,
    }
    let sides = [
        Side {
            start: Point::new(-w2, -h2),
            dir: Point::new(1.0, 0.0),
            len: spec.width,
            normal: Point::new(0.0, -1.0),
            panels: spec.panels_horizontal,
        },
        Side {
            start: Point::new(w2, -h2),
            dir: Point::new(0.0, 1.0),
            len: spec.height,
            normal: Point::new(1.0, 0.0),
            panels: spec.panels_vertical,
        },
        Side {
            start: Point::new(w2, h2),
            dir: Point::new(-1.0, 0.0),
            len: spec.width,
            normal: Point::new(0.0, 1.0),
            panels: spec.panels_horizontal,
        },
        Side {
            start: Point::new(-w2, h2),
            dir: Point::new(0.0, -1.0),
            len: spec.height,
            normal: Point::new(-1.0, 0.0),
            panels: spec.panels_vertical,
        },
    ];
    let n_total = spec.node_count();
    let mut nodes = Vec::with_capacity(n_total);
    let mut normals = Vec::with_capacity(n_total);
    let mut weights = Vec::with_capacity(n_total);
    let mut params = Vec::with_capacity(n_total);
    let mut breaks = vec![0.0];
    let mut s0 = 0.0;
    for side in &sides {
        let plen = side.len / side.panels as f64;
        for p in 0..side.panels {
            let pstart = plen * p as f64;
            for (xi, wi) in gl_x.iter().zip(&gl_w) {
                // map [-1, 1] to the panel
                let local = pstart + 0.5 * plen * (xi + 1.0);
                nodes.push(spec.center + side.start + side.dir * local);
                normals.push(side.normal);
                weights.push(0.5 * plen * wi);
                params.push(s0 + local);
            }
            breaks.push(s0 + pstart + plen);
        }
        s0 += side.len;
    }
    Ok(DiscretizedCurve {
        nodes,
        normals,
        weights,
        params,
        closed: true,
        kress: None,
        gl_panels: Some(GlPanels { order: spec.panel_order, breaks }),
    })
}

/// Axis-aligned proxy rectangle: shape bounding box plus `margin` on every
/// side.
pub fn proxy_for(
    spec: &ShapeSpec,
    margin: f64,
    panels_horizontal: usize,
    panels_vertical: usize,
    panel_order: usize,
) -> Result<RectProxySpec> {
    if margin <= 0.0 {
        return Err(Error::Config(format!("proxy margin must be positive, got {margin}")));
    }
    let (hx, hy) = spec.half_extents();
    let proxy = RectProxySpec {
        center: spec.center,
        width: 2.0 * (hx + margin),
        height: 2.0 * (hy + margin),
        panels_horizontal,
        panels_vertical,
        panel_order,
    };
    proxy.validate()?;
    Ok(proxy)
}

/// Check that the rectangles in a multi-scatterer configuration are
/// pairwise disjoint.
pub fn validate_proxies_disjoint(proxies: &[RectProxySpec]) -> Result<()> {
    for i in 0..proxies.len() {
        for j in (i + 1)..proxies.len() {
            if proxies[i].distance(&proxies[j]) <= 0.0 {
                return Err(Error::Geometry(format!(
                    "proxy rectangles {i} and {j} overlap or touch"
                )));
            }
        }
    }
    Ok(())
}

/// Staggered-lattice photonic crystal: 41 x 21 star-shaped ellipses with a
/// bent waveguide channel removed (827 scatterers at full size).
///
/// Columns are staggered: odd columns sit half a cell higher than even
/// ones. `scale_down = Some((imax, jmax))` keeps only the sub-lattice with
/// i <= imax, j <= jmax, applying the same channel-removal rule.
pub fn photonic_lattice(scale_down: Option<(usize, usize)>) -> Vec<ShapeSpec> {
    let (imax, jmax) = scale_down.unwrap_or((41, 21));
    let (imax, jmax) = (imax.min(41), jmax.min(21));
    let a = 0.05 / 3.0;
    let b = 0.1 / 3.0;
    let mut out = Vec::new();
    for i in 1..=imax {
        for j in 1..=jmax {
            // waveguide channel: a bent duct entering at mid-height on the
            // left and exiting through the top
            let in_channel = (j == 11 && i <= 24) || (i == 24 && j >= 12);
            if in_channel {
                continue;
            }
            let x = -1.0 + (i as f64 - 1.0) * 0.05;
            let y = if i % 2 == 0 {
                -1.0 + (j as f64 - 1.0) * 0.1
            } else {
                -0.95 + (j as f64 - 1.0) * 0.1
            };
            out.push(ShapeSpec::star_ellipse(a, b, Point::new(x, y)));
        }
    }
    out
}

/// Which reading of the two-row array offset formula to use; both give a
/// column spacing of 3, they differ in the leftmost column position.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowFormula {
    /// x = (-10 + (i-1)) * 3, i.e. columns start at -30.
    ScaledOffset,
    /// x = -10 + (i-1) * 3, i.e. columns start at -10.
    UnscaledOffset,
}

/// Two staggered rows of 21 + 20 star-shaped ellipses (a = 1, b = 0.5) at
/// heights 1.6 and 3.6, with deterministic uniform perturbations in
/// [-amplitude, amplitude] drawn from a seeded 64-bit LCG.
///
/// Draw order is row-major, first the horizontal then the vertical offset,
/// so a given seed reproduces the same geometry everywhere.
pub fn layered_array(
    seed: u64,
    amplitude: f64,
    formula: RowFormula,
    count: Option<usize>,
) -> Vec<ShapeSpec> {
    let mut rng = Lcg::new(seed);
    let mut out = Vec::new();
    let mut push = |x0: f64, y0: f64, rng: &mut Lcg| {
        let eta1 = rng.uniform(-amplitude, amplitude);
        let eta2 = rng.uniform(-amplitude, amplitude);
        out.push(ShapeSpec::star_ellipse(1.0, 0.5, Point::new(x0 + eta1, y0 + eta2)));
    };
    for i in 1..=21 {
        let x = match formula {
            RowFormula::ScaledOffset => (-10.0 + (i as f64 - 1.0)) * 3.0,
            RowFormula::UnscaledOffset => -10.0 + (i as f64 - 1.0) * 3.0,
        };
        push(x, 1.6, &mut rng);
    }
    for i in 1..=20 {
        let x = match formula {
            RowFormula::ScaledOffset => (-9.5 + (i as f64 - 1.0)) * 3.0,
            RowFormula::UnscaledOffset => -9.5 + (i as f64 - 1.0) * 3.0,
        };
        push(x, 3.6, &mut rng);
    }
    match count {
        Some(c) => out.into_iter().take(c).collect(),
        None => out,
    }
}

/// Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration on the
/// Legendre polynomial.
pub fn gauss_legendre(order: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(order >= 1);
    let n = order;
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Chebyshev-based initial guess
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        loop {
            let (p, dp) = legendre(n, z);
            let dz = p / dp;
            z -= dz;
            if dz.abs() < 1e-15 {
                break;
            }
        }
        let (_, dp) = legendre(n, z);
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        w[n - 1 - i] = w[i];
    }
    (x, w)
}

/// P_n(z) and its derivative.
fn legendre(n: usize, z: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = z;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
    (p1, dp)
}

/// Evaluate panelwise Legendre interpolation of per-node data on a proxy
/// discretization at arbitrary arclength positions. Used to compare
/// solutions across proxy refinement levels.
pub fn interp_panel_data(
    curve: &DiscretizedCurve,
    values: &[num_complex::Complex64],
    targets_s: &[f64],
) -> Vec<num_complex::Complex64> {
    let panels = curve.gl_panels.as_ref().expect("proxy curve with panel layout");
    let order = panels.order;
    let (gl_x, _) = gauss_legendre(order);
    // barycentric weights for the Gauss grid
    let mut bary = vec![0.0_f64; order];
    for i in 0..order {
        let mut prod = 1.0;
        for j in 0..order {
            if i != j {
                prod *= gl_x[i] - gl_x[j];
            }
        }
        bary[i] = 1.0 / prod;
    }
    let perim = *panels.breaks.last().unwrap();
    targets_s
        .iter()
        .map(|&s| {
            let s = s.rem_euclid(perim);
            let k = match panels.breaks.binary_search_by(|b| b.partial_cmp(&s).unwrap()) {
                Ok(idx) => idx.min(panels.breaks.len() - 2),
                Err(idx) => idx.saturating_sub(1).min(panels.breaks.len() - 2),
            };
            let (lo, hi) = (panels.breaks[k], panels.breaks[k + 1]);
            let xi = 2.0 * (s - lo) / (hi - lo) - 1.0;
            let base = k * order;
            // barycentric form; exact hit on a node short-circuits
            let mut num = num_complex::Complex64::new(0.0, 0.0);
            let mut den = 0.0;
            let mut hit = None;
            for i in 0..order {
                let d = xi - gl_x[i];
                if d.abs() < 1e-14 {
                    hit = Some(values[base + i]);
                    break;
                }
                let c = bary[i] / d;
                num += values[base + i] * c;
                den += c;
            }
            hit.unwrap_or(num / den)
        })
        .collect()
}

struct Hasher {
    state: u64,
}

impl Hasher {
    fn new() -> Self {
        Self { state: 0xcbf29ce484222325 }
    }
    fn mix(&mut self, v: u64) {
        // FNV-1a over the 8 bytes
        for b in v.to_le_bytes() {
            self.state ^= b as u64;
            self.state = self.state.wrapping_mul(0x100000001b3);
        }
    }
    fn value(&self) -> u64 {
        self.state
    }
}
