//! Network geometry and random channel generation.
//!
//! Base stations sit on a hexagonal lattice with configurable spacing; users
//! are drawn uniformly inside their serving cell's hexagon subject to a
//! minimum distance from the BS. Channels combine log-distance pathloss,
//! lognormal shadowing, and unit-variance Rayleigh fading. Everything is a
//! pure function of `(config, seed)`.
//!
//! Powers are linear milliwatts throughout; channel entries are amplitude
//! gains (dimensionless).

use std::io::{BufRead, Write};
use std::path::Path;

use nalgebra::Point2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::dual::InnerOptions;
use crate::error::{Error, Result};
use crate::outer::OuterConfig;
use crate::quant::Bits;
use crate::types::{C64, CMat, CVec};

/// Speed of light, m/s.
const C_LIGHT: f64 = 299_792_458.0;
/// Thermal noise density at 290 K, dBm/Hz.
const THERMAL_NOISE_DBM_HZ: f64 = -174.0;
/// Rejection-sampling budget per user.
const MAX_PLACEMENT_ATTEMPTS: usize = 10_000;

/// Target SINR specification: one value for every user, or one per user in
/// flat (cell, user) order.
#[derive(Debug, Clone, PartialEq)]
pub enum TargetSinr {
    UniformDb(f64),
    PerUserDb(Vec<f64>),
}

impl TargetSinr {
    /// Expands to a flat vector of linear SINR targets, one per (cell, user).
    pub fn linear(&self, n_cells: usize, n_users: usize) -> Result<Vec<f64>> {
        let n = n_cells * n_users;
        match self {
            TargetSinr::UniformDb(db) => Ok(vec![db_to_lin(*db); n]),
            TargetSinr::PerUserDb(list) => {
                if list.len() != n {
                    return Err(Error::Config(format!(
                        "target_sinr_db list has {} entries, expected {}",
                        list.len(),
                        n
                    )));
                }
                Ok(list.iter().map(|&db| db_to_lin(db)).collect())
            }
        }
    }
}

/// Solver tolerances and limits, grouped.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SolverOptions {
    pub inner: InnerOptions,
    pub outer: OuterConfig,
}

/// Full description of one network instance.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkConfig {
    pub n_cells: usize,
    pub n_users_per_cell: usize,
    pub n_antennas: usize,
    pub bits: Bits,
    pub target_sinr: TargetSinr,
    pub inter_bs_distance_m: f64,
    pub min_bs_user_distance_m: f64,
    pub carrier_freq_hz: f64,
    pub bandwidth_hz: f64,
    pub noise_figure_db: f64,
    pub shadowing_std_db: f64,
    pub pathloss_exponent: f64,
    pub pathloss_ref_distance_m: f64,
    pub seed: u64,
    pub solver: SolverOptions,
}

impl Default for NetworkConfig {
    fn default() -> Self {
        Self {
            n_cells: 1,
            n_users_per_cell: 1,
            n_antennas: 8,
            bits: Bits::Infinite,
            target_sinr: TargetSinr::UniformDb(2.0),
            inter_bs_distance_m: 2000.0,
            min_bs_user_distance_m: 100.0,
            carrier_freq_hz: 2.4e9,
            bandwidth_hz: 10.0e6,
            noise_figure_db: 5.0,
            shadowing_std_db: 8.7,
            pathloss_exponent: 3.5,
            pathloss_ref_distance_m: 100.0,
            seed: 0,
            solver: SolverOptions::default(),
        }
    }
}

impl NetworkConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_cells == 0 || self.n_users_per_cell == 0 || self.n_antennas == 0 {
            return Err(Error::Config(
                "n_cells, n_users_per_cell, and n_antennas must all be >= 1".into(),
            ));
        }
        if !(self.inter_bs_distance_m > 0.0) {
            return Err(Error::Config("inter_bs_distance_m must be positive".into()));
        }
        if !(self.min_bs_user_distance_m >= 0.0) {
            return Err(Error::Config("min_bs_user_distance_m must be >= 0".into()));
        }
        // Users live inside a hexagon of circumradius spacing/sqrt(3); a
        // minimum distance at or beyond that leaves no room at all.
        if self.min_bs_user_distance_m >= self.inter_bs_distance_m / 3.0_f64.sqrt() {
            return Err(Error::Config(format!(
                "min_bs_user_distance_m {} leaves no room inside a cell of circumradius {}",
                self.min_bs_user_distance_m,
                self.inter_bs_distance_m / 3.0_f64.sqrt()
            )));
        }
        if !(self.carrier_freq_hz > 0.0) || !(self.bandwidth_hz > 0.0) {
            return Err(Error::Config("carrier_freq_hz and bandwidth_hz must be positive".into()));
        }
        if !(self.pathloss_ref_distance_m > 0.0) {
            return Err(Error::Config("pathloss_ref_distance_m must be positive".into()));
        }
        if !(self.shadowing_std_db >= 0.0) {
            return Err(Error::Config("shadowing_std_db must be >= 0".into()));
        }
        self.target_sinr.linear(self.n_cells, self.n_users_per_cell)?;
        Ok(())
    }

    /// Noise power at the receiver in linear mW:
    /// -174 dBm/Hz + 10 log10(bandwidth) + noise figure.
    pub fn noise_power_mw(&self) -> f64 {
        let dbm = THERMAL_NOISE_DBM_HZ + 10.0 * self.bandwidth_hz.log10() + self.noise_figure_db;
        db_to_lin(dbm)
    }

    /// Deterministic large-scale power gain (no shadowing) at `distance_m`:
    /// free-space at the reference distance, log-distance beyond it.
    /// Distances below the reference are clamped to it.
    pub fn pathloss_gain(&self, distance_m: f64) -> f64 {
        let d0 = self.pathloss_ref_distance_m;
        let d = distance_m.max(d0);
        let wavelength = C_LIGHT / self.carrier_freq_hz;
        let free_space_at_ref = (wavelength / (4.0 * std::f64::consts::PI * d0)).powi(2);
        free_space_at_ref * (d0 / d).powf(self.pathloss_exponent)
    }

    /// Linear SINR targets in flat (cell, user) order.
    pub fn sinr_targets(&self) -> Result<Vec<f64>> {
        self.target_sinr.linear(self.n_cells, self.n_users_per_cell)
    }

    /// Seeds the generator used by [`place_network`] / [`gen_channels`].
    pub fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }
}

pub fn db_to_lin(db: f64) -> f64 {
    10.0_f64.powf(db / 10.0)
}

pub fn lin_to_db(lin: f64) -> f64 {
    10.0 * lin.log10()
}

/// BS and user positions, meters.
#[derive(Debug, Clone, PartialEq)]
pub struct Geometry {
    pub bs: Vec<Point2<f64>>,
    /// users[cell][user]
    pub users: Vec<Vec<Point2<f64>>>,
}

/// One realization of every BS-to-user channel.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelSet {
    n_cells: usize,
    n_users: usize,
    n_antennas: usize,
    /// links[(bs * n_cells + cell) * n_users + user], each of length n_antennas.
    links: Vec<CVec>,
    /// stacked[i]: n_antennas x (n_cells * n_users); column (j * n_users + v)
    /// is the channel from BS i to user v of cell j.
    stacked: Vec<CMat>,
    noise_variance: f64,
}

impl ChannelSet {
    pub fn n_cells(&self) -> usize {
        self.n_cells
    }

    pub fn n_users(&self) -> usize {
        self.n_users
    }

    pub fn n_antennas(&self) -> usize {
        self.n_antennas
    }

    /// Total number of users, `n_cells * n_users`.
    pub fn n_links(&self) -> usize {
        self.n_cells * self.n_users
    }

    /// Noise power sigma^2 in mW.
    pub fn noise_variance(&self) -> f64 {
        self.noise_variance
    }

    /// Channel from BS `bs` to user `user` of cell `cell`.
    pub fn h(&self, bs: usize, cell: usize, user: usize) -> &CVec {
        &self.links[(bs * self.n_cells + cell) * self.n_users + user]
    }

    /// Channel from BS `bs` to the user with flat index `cell * n_users + user`.
    pub fn h_flat(&self, bs: usize, user_idx: usize) -> &CVec {
        &self.links[bs * self.n_cells * self.n_users + user_idx]
    }

    /// Stacked matrix H_i of all channels seen from BS `bs`, columns in flat
    /// (cell, user) order.
    pub fn stacked(&self, bs: usize) -> &CMat {
        &self.stacked[bs]
    }

    pub fn user_index(&self, cell: usize, user: usize) -> usize {
        cell * self.n_users + user
    }

    /// Builds a channel set from an explicit per-link function, mainly for
    /// fixtures and tests. `f(bs, cell, user)` must return a vector of
    /// length `n_antennas`.
    pub fn from_link_fn<F>(
        n_cells: usize,
        n_users: usize,
        n_antennas: usize,
        noise_variance: f64,
        mut f: F,
    ) -> Result<Self>
    where
        F: FnMut(usize, usize, usize) -> CVec,
    {
        if n_cells == 0 || n_users == 0 || n_antennas == 0 {
            return Err(Error::Config("channel set dimensions must be >= 1".into()));
        }
        if !(noise_variance > 0.0) {
            return Err(Error::Config("noise_variance must be positive".into()));
        }
        let mut links = Vec::with_capacity(n_cells * n_cells * n_users);
        for bs in 0..n_cells {
            for cell in 0..n_cells {
                for user in 0..n_users {
                    let h = f(bs, cell, user);
                    if h.len() != n_antennas {
                        return Err(Error::Config(format!(
                            "link ({bs},{cell},{user}) has length {}, expected {n_antennas}",
                            h.len()
                        )));
                    }
                    links.push(h);
                }
            }
        }
        Ok(Self::from_links(n_cells, n_users, n_antennas, links, noise_variance))
    }

    fn from_links(
        n_cells: usize,
        n_users: usize,
        n_antennas: usize,
        links: Vec<CVec>,
        noise_variance: f64,
    ) -> Self {
        let stacked = (0..n_cells)
            .map(|bs| {
                CMat::from_columns(
                    &(0..n_cells * n_users)
                        .map(|idx| links[bs * n_cells * n_users + idx].clone())
                        .collect::<Vec<_>>(),
                )
            })
            .collect();
        Self {
            n_cells,
            n_users,
            n_antennas,
            links,
            stacked,
            noise_variance,
        }
    }

    /// Writes the channel set as CSV: a header line with the dimensions and
    /// noise variance, then one `bs,cell,user,antenna,re,im` row per entry.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(
            out,
            "# qcomp-channels-v1 n_cells={} n_users={} n_antennas={} noise_variance_mw={}",
            self.n_cells, self.n_users, self.n_antennas, self.noise_variance
        )?;
        writeln!(out, "bs,cell,user,antenna,re,im")?;
        for bs in 0..self.n_cells {
            for cell in 0..self.n_cells {
                for user in 0..self.n_users {
                    let h = self.h(bs, cell, user);
                    for m in 0..self.n_antennas {
                        writeln!(out, "{bs},{cell},{user},{m},{},{}", h[m].re, h[m].im)?;
                    }
                }
            }
        }
        Ok(())
    }

    pub fn save_csv<P: AsRef<Path>>(&self, path: P) -> Result<()> {
        let file = std::fs::File::create(path)?;
        self.write_csv(std::io::BufWriter::new(file))
    }

    /// Parses the format produced by [`write_csv`].
    pub fn read_csv<R: BufRead>(input: R) -> Result<Self> {
        let mut lines = input.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::ConfigParse("empty channel file".into()))??;
        let mut n_cells = 0usize;
        let mut n_users = 0usize;
        let mut n_antennas = 0usize;
        let mut noise_variance = f64::NAN;
        if !header.starts_with("# qcomp-channels-v1") {
            return Err(Error::ConfigParse("missing qcomp-channels-v1 header".into()));
        }
        for token in header.split_whitespace().skip(2) {
            let (key, value) = token
                .split_once('=')
                .ok_or_else(|| Error::ConfigParse(format!("bad header token {token}")))?;
            match key {
                "n_cells" => n_cells = parse_field(key, value)?,
                "n_users" => n_users = parse_field(key, value)?,
                "n_antennas" => n_antennas = parse_field(key, value)?,
                "noise_variance_mw" => noise_variance = parse_field(key, value)?,
                other => return Err(Error::ConfigParse(format!("unknown header key {other}"))),
            }
        }
        if n_cells == 0 || n_users == 0 || n_antennas == 0 || !noise_variance.is_finite() {
            return Err(Error::ConfigParse("incomplete channel header".into()));
        }
        let n_links = n_cells * n_cells * n_users;
        let mut links = vec![CVec::zeros(n_antennas); n_links];
        let mut seen = vec![false; n_links * n_antennas];
        for line in lines {
            let line = line?;
            if line.trim().is_empty() || line.starts_with("bs,") {
                continue;
            }
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != 6 {
                return Err(Error::ConfigParse(format!("bad channel row: {line}")));
            }
            let bs: usize = parse_field("bs", fields[0])?;
            let cell: usize = parse_field("cell", fields[1])?;
            let user: usize = parse_field("user", fields[2])?;
            let m: usize = parse_field("antenna", fields[3])?;
            let re: f64 = parse_field("re", fields[4])?;
            let im: f64 = parse_field("im", fields[5])?;
            if bs >= n_cells || cell >= n_cells || user >= n_users || m >= n_antennas {
                return Err(Error::ConfigParse(format!("index out of range: {line}")));
            }
            let idx = (bs * n_cells + cell) * n_users + user;
            links[idx][m] = C64::new(re, im);
            seen[idx * n_antennas + m] = true;
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::ConfigParse("channel file is missing entries".into()));
        }
        Ok(Self::from_links(n_cells, n_users, n_antennas, links, noise_variance))
    }

    pub fn load_csv<P: AsRef<Path>>(path: P) -> Result<Self> {
        let file = std::fs::File::open(path)?;
        Self::read_csv(std::io::BufReader::new(file))
    }
}

fn parse_field<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::ConfigParse(format!("could not parse {key}={value}")))
}

/// Axial hex coordinates -> cartesian, for lattice spacing `s`.
fn hex_to_cartesian(q: i64, r: i64, s: f64) -> Point2<f64> {
    Point2::new(s * (q as f64 + r as f64 / 2.0), s * 3.0_f64.sqrt() / 2.0 * r as f64)
}

/// First `n` sites of a hexagonal lattice in spiral order (center first,
/// then rings of increasing radius). Adjacent sites are exactly `s` apart.
fn hex_spiral(n: usize, s: f64) -> Vec<Point2<f64>> {
    const DIRS: [(i64, i64); 6] = [(1, 0), (0, 1), (-1, 1), (-1, 0), (0, -1), (1, -1)];
    let mut sites = vec![Point2::new(0.0, 0.0)];
    let mut ring = 1i64;
    while sites.len() < n {
        // Start each ring at the site ring steps along direction 4, then walk
        // the six sides.
        let (mut q, mut r) = (DIRS[4].0 * ring, DIRS[4].1 * ring);
        for side in 0..6 {
            for _ in 0..ring {
                if sites.len() == n {
                    return sites;
                }
                sites.push(hex_to_cartesian(q, r, s));
                q += DIRS[side].0;
                r += DIRS[side].1;
            }
        }
        ring += 1;
    }
    sites
}

/// Membership test for the hexagonal Voronoi cell centered at the origin
/// (flat sides facing the six lattice neighbors, apothem `s/2`).
fn in_hexagon(p: &Point2<f64>, s: f64) -> bool {
    let half = s / 2.0;
    for k in 0..3 {
        let angle = std::f64::consts::PI / 3.0 * k as f64;
        let proj = p.x * angle.cos() + p.y * angle.sin();
        if proj.abs() > half {
            return false;
        }
    }
    true
}

/// Places BSs on the hexagonal lattice and draws each cell's users uniformly
/// inside its hexagon, at least `min_bs_user_distance_m` from the serving BS.
pub fn place_network<R: Rng>(cfg: &NetworkConfig, rng: &mut R) -> Result<Geometry> {
    cfg.validate()?;
    let s = cfg.inter_bs_distance_m;
    let circumradius = s / 3.0_f64.sqrt();
    let bs = hex_spiral(cfg.n_cells, s);
    let mut users = Vec::with_capacity(cfg.n_cells);
    for (cell, center) in bs.iter().enumerate() {
        let mut cell_users = Vec::with_capacity(cfg.n_users_per_cell);
        for user in 0..cfg.n_users_per_cell {
            let mut placed = None;
            for _ in 0..MAX_PLACEMENT_ATTEMPTS {
                let dx = (rng.random::<f64>() * 2.0 - 1.0) * circumradius;
                let dy = (rng.random::<f64>() * 2.0 - 1.0) * circumradius;
                let offset = Point2::new(dx, dy);
                let dist = (dx * dx + dy * dy).sqrt();
                if dist >= cfg.min_bs_user_distance_m && in_hexagon(&offset, s) {
                    placed = Some(Point2::new(center.x + dx, center.y + dy));
                    break;
                }
            }
            match placed {
                Some(p) => cell_users.push(p),
                None => {
                    return Err(Error::Placement {
                        cell,
                        user,
                        attempts: MAX_PLACEMENT_ATTEMPTS,
                    })
                }
            }
        }
        users.push(cell_users);
    }
    Ok(Geometry { bs, users })
}

/// Draws one channel realization for the given geometry.
///
/// For every BS-user link: gain = pathloss(distance) * lognormal shadowing,
/// and the small-scale vector is i.i.d. CN(0, 1) per antenna. Draw order is
/// fixed (bs, cell, user): one shadowing normal, then 2 * n_antennas fading
/// normals.
pub fn gen_channels<R: Rng>(cfg: &NetworkConfig, geom: &Geometry, rng: &mut R) -> ChannelSet {
    let n_links = cfg.n_cells * cfg.n_cells * cfg.n_users_per_cell;
    let mut links = Vec::with_capacity(n_links);
    for bs in 0..cfg.n_cells {
        for cell in 0..cfg.n_cells {
            for user in 0..cfg.n_users_per_cell {
                let d = nalgebra::distance(&geom.bs[bs], &geom.users[cell][user]);
                let shadow_db: f64 = if cfg.shadowing_std_db > 0.0 {
                    cfg.shadowing_std_db * rng.sample::<f64, _>(StandardNormal)
                } else {
                    0.0
                };
                let gain = cfg.pathloss_gain(d) * db_to_lin(shadow_db);
                let amplitude = gain.sqrt() * std::f64::consts::FRAC_1_SQRT_2;
                let h = CVec::from_fn(cfg.n_antennas, |_, _| {
                    let re: f64 = rng.sample(StandardNormal);
                    let im: f64 = rng.sample(StandardNormal);
                    C64::new(amplitude * re, amplitude * im)
                });
                links.push(h);
            }
        }
    }
    ChannelSet::from_links(
        cfg.n_cells,
        cfg.n_users_per_cell,
        cfg.n_antennas,
        links,
        cfg.noise_power_mw(),
    )
}

/// Convenience: validate, seed the RNG from the config, and generate both
/// geometry and channels.
pub fn generate(cfg: &NetworkConfig) -> Result<(Geometry, ChannelSet)> {
    let mut rng = cfg.rng();
    let geom = place_network(cfg, &mut rng)?;
    let channels = gen_channels(cfg, &geom, &mut rng);
    Ok((geom, channels))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn small_cfg() -> NetworkConfig {
        NetworkConfig {
            n_cells: 4,
            n_users_per_cell: 2,
            n_antennas: 3,
            seed: 42,
            ..Default::default()
        }
    }

    #[test]
    fn single_cell_geometry() {
        let cfg = NetworkConfig {
            n_cells: 1,
            n_users_per_cell: 8,
            seed: 5,
            ..Default::default()
        };
        let geom = place_network(&cfg, &mut cfg.rng()).unwrap();
        assert_eq!(geom.bs.len(), 1);
        assert_eq!(geom.bs[0], Point2::new(0.0, 0.0));
        let circumradius = cfg.inter_bs_distance_m / 3.0_f64.sqrt();
        for u in &geom.users[0] {
            let d = nalgebra::distance(&geom.bs[0], u);
            assert!(d >= cfg.min_bs_user_distance_m);
            assert!(d <= circumradius + 1e-9);
        }
    }

    #[test]
    fn adjacent_spacing_is_exact() {
        let cfg = small_cfg();
        let geom = place_network(&cfg, &mut cfg.rng()).unwrap();
        let mut min_pair = f64::INFINITY;
        for i in 0..4 {
            let mut nearest = f64::INFINITY;
            for j in 0..4 {
                if i != j {
                    let d = nalgebra::distance(&geom.bs[i], &geom.bs[j]);
                    nearest = nearest.min(d);
                    min_pair = min_pair.min(d);
                }
            }
            assert_relative_eq!(nearest, 2000.0, max_relative = 1e-12);
        }
        assert_relative_eq!(min_pair, 2000.0, max_relative = 1e-12);
    }

    #[test]
    fn placement_is_deterministic() {
        let cfg = small_cfg();
        let a = place_network(&cfg, &mut cfg.rng()).unwrap();
        let b = place_network(&cfg, &mut cfg.rng()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn channels_are_deterministic_bitwise() {
        let cfg = small_cfg();
        let (_, a) = generate(&cfg).unwrap();
        let (_, b) = generate(&cfg).unwrap();
        for (x, y) in a.links.iter().zip(&b.links) {
            for (cx, cy) in x.iter().zip(y.iter()) {
                assert_eq!(cx.re.to_bits(), cy.re.to_bits());
                assert_eq!(cx.im.to_bits(), cy.im.to_bits());
            }
        }
        assert_eq!(a.noise_variance().to_bits(), b.noise_variance().to_bits());
    }

    #[test]
    fn pathloss_anchor_and_monotonicity() {
        let cfg = NetworkConfig::default();
        let wavelength = C_LIGHT / cfg.carrier_freq_hz;
        let free_space = (wavelength / (4.0 * std::f64::consts::PI * 100.0)).powi(2);
        assert_relative_eq!(cfg.pathloss_gain(100.0), free_space, max_relative = 1e-12);
        let mut prev = cfg.pathloss_gain(100.0);
        for d in [150.0, 300.0, 700.0, 1500.0, 3000.0] {
            let g = cfg.pathloss_gain(d);
            assert!(g < prev, "gain must strictly decrease with distance");
            prev = g;
        }
    }

    #[test]
    fn noise_power_matches_hand_computation() {
        // -174 + 10 log10(10 MHz) + 5 = -99 dBm.
        let cfg = NetworkConfig::default();
        assert_relative_eq!(cfg.noise_power_mw(), db_to_lin(-99.0), max_relative = 1e-12);
    }

    #[test]
    fn fading_has_unit_variance() {
        // Disable shadowing so the only randomness around the pathloss mean
        // is the small-scale term; estimate E[|z|^2] over 1e5 draws.
        let cfg = NetworkConfig {
            n_cells: 1,
            n_users_per_cell: 1,
            n_antennas: 100_000,
            shadowing_std_db: 0.0,
            seed: 9,
            ..Default::default()
        };
        let (geom, ch) = generate(&cfg).unwrap();
        let d = nalgebra::distance(&geom.bs[0], &geom.users[0][0]);
        let g = cfg.pathloss_gain(d);
        let mean_sq: f64 =
            ch.h(0, 0, 0).iter().map(|c| c.norm_sqr()).sum::<f64>() / (g * 100_000.0);
        assert!((mean_sq - 1.0).abs() < 0.02, "E[|z|^2] = {mean_sq}");
    }

    #[test]
    fn stacked_matrix_column_order() {
        let cfg = small_cfg();
        let (_, ch) = generate(&cfg).unwrap();
        for bs in 0..cfg.n_cells {
            let h_i = ch.stacked(bs);
            for cell in 0..cfg.n_cells {
                for user in 0..cfg.n_users_per_cell {
                    let col = h_i.column(ch.user_index(cell, user));
                    let link = ch.h(bs, cell, user);
                    for m in 0..cfg.n_antennas {
                        assert_eq!(col[m], link[m]);
                    }
                }
            }
        }
    }

    #[test]
    fn channel_csv_round_trip() {
        let cfg = small_cfg();
        let (_, ch) = generate(&cfg).unwrap();
        let mut buf = Vec::new();
        ch.write_csv(&mut buf).unwrap();
        let back = ChannelSet::read_csv(std::io::BufReader::new(buf.as_slice())).unwrap();
        assert_eq!(ch, back);
    }

    #[test]
    fn impossible_min_distance_is_rejected() {
        let cfg = NetworkConfig {
            min_bs_user_distance_m: 1400.0,
            ..Default::default()
        };
        assert!(matches!(cfg.validate(), Err(Error::Config(_))));
    }
}
