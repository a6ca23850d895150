//! Economic-complexity indices over country-product export matrices and the
//! trade hypergraph encoding.
//!
//! Countries export a product when their revealed comparative advantage
//! (Balassa index on export values) reaches a threshold. The trade
//! hypergraph has one hyperedge per product: exporters with RCA above 1 in
//! the head, importers with the import-side index above 1 in the tail.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::Deserialize;

use crate::diagnostics::{kendall_tau, spearman};
use crate::hypercore::{DirectedHypergraph, Hyperedge};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct TradeRecord {
    pub year: i32,
    pub country: String,
    pub product: String,
    pub export_value: f64,
    pub import_value: f64,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct CountryMeta {
    pub country: String,
    pub population: f64,
    pub avg_trade: f64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct TradeTable {
    pub records: Vec<TradeRecord>,
    pub meta: Option<BTreeMap<String, CountryMeta>>,
}

impl TradeTable {
    pub fn new(records: Vec<TradeRecord>, meta: Option<Vec<CountryMeta>>) -> Result<Self> {
        if let Some(r) = records.iter().find(|r| !(r.export_value >= 0.0 && r.import_value >= 0.0)) {
            return Err(Error::InvalidArgument(format!(
                "negative trade value for {} / {} in {}",
                r.country, r.product, r.year
            )));
        }
        let meta = meta.map(|m| m.into_iter().map(|c| (c.country.clone(), c)).collect());
        Ok(TradeTable { records, meta })
    }

    pub fn read(trade: &Path, meta: Option<&Path>) -> Result<Self> {
        let records = csv::Reader::from_path(trade)?.deserialize().collect::<Result<Vec<TradeRecord>, _>>()?;
        let meta = match meta {
            Some(p) => Some(csv::Reader::from_path(p)?.deserialize().collect::<Result<Vec<CountryMeta>, _>>()?),
            None => None,
        };
        TradeTable::new(records, meta)
    }

    /// Population above one million and average trade above one billion
    /// USD; every country passes when no metadata was supplied.
    pub fn passes_filters(&self, country: &str) -> bool {
        match &self.meta {
            None => true,
            Some(m) => m.get(country).is_some_and(|c| c.population > 1e6 && c.avg_trade > 1e9),
        }
    }
}

/// Balassa indices of one year. Rows are countries and columns products,
/// both sorted by name.
#[derive(Debug, Clone, PartialEq)]
pub struct RcaMatrix {
    pub countries: Vec<String>,
    pub products: Vec<String>,
    pub export: DMatrix<f64>,
    pub import: DMatrix<f64>,
}

fn balassa(x: &DMatrix<f64>) -> DMatrix<f64> {
    let total: f64 = x.sum();
    let rows: Vec<f64> = x.row_iter().map(|r| r.sum()).collect();
    let cols: Vec<f64> = x.column_iter().map(|c| c.sum()).collect();
    let mut zero = 0usize;
    let out = DMatrix::from_fn(x.nrows(), x.ncols(), |c, p| {
        if rows[c] == 0.0 || cols[p] == 0.0 || total == 0.0 {
            zero += 1;
            return 0.0;
        }
        (x[(c, p)] / rows[c]) / (cols[p] / total)
    });
    if zero > 0 {
        log::warn!("{zero} RCA entries have a zero denominator and were set to 0");
    }
    out
}

pub fn rca(t: &TradeTable, year: i32) -> Result<RcaMatrix> {
    let recs: Vec<&TradeRecord> = t.records.iter().filter(|r| r.year == year).collect();
    if recs.is_empty() {
        return Err(Error::InvalidArgument(format!("no trade records for year {year}")));
    }
    let countries: Vec<String> = recs.iter().map(|r| r.country.clone()).collect::<BTreeSet<_>>().into_iter().collect();
    let products: Vec<String> = recs.iter().map(|r| r.product.clone()).collect::<BTreeSet<_>>().into_iter().collect();
    let ci = |c: &str| countries.binary_search_by(|x| x.as_str().cmp(c)).expect("collected");
    let pi = |p: &str| products.binary_search_by(|x| x.as_str().cmp(p)).expect("collected");
    let mut ex = DMatrix::zeros(countries.len(), products.len());
    let mut im = DMatrix::zeros(countries.len(), products.len());
    for r in recs {
        let (c, p) = (ci(&r.country), pi(&r.product));
        ex[(c, p)] += r.export_value;
        im[(c, p)] += r.import_value;
    }
    Ok(RcaMatrix { export: balassa(&ex), import: balassa(&im), countries, products })
}

/// Binary country-product matrix without empty rows or columns.
#[derive(Debug, Clone, PartialEq)]
pub struct Biadjacency {
    pub countries: Vec<String>,
    pub products: Vec<String>,
    pub m: DMatrix<f64>,
}

impl Biadjacency {
    /// Drops empty rows and columns, logging what was removed.
    pub fn new(countries: Vec<String>, products: Vec<String>, m: DMatrix<f64>) -> Result<Self> {
        let rows: Vec<usize> = (0..m.nrows()).filter(|&c| m.row(c).sum() > 0.0).collect();
        let cols: Vec<usize> = (0..m.ncols()).filter(|&p| m.column(p).sum() > 0.0).collect();
        if rows.len() < m.nrows() {
            let gone: Vec<&str> = (0..m.nrows()).filter(|c| !rows.contains(c)).map(|c| countries[c].as_str()).collect();
            log::info!("dropping {} countries without exports: {}", gone.len(), gone.join(","));
        }
        if cols.len() < m.ncols() {
            log::info!("dropping {} products without exporters", m.ncols() - cols.len());
        }
        if rows.is_empty() || cols.is_empty() {
            return Err(Error::InvalidArgument("empty country-product matrix".into()));
        }
        let sub = DMatrix::from_fn(rows.len(), cols.len(), |i, j| m[(rows[i], cols[j])]);
        Ok(Biadjacency {
            countries: rows.iter().map(|&c| countries[c].clone()).collect(),
            products: cols.iter().map(|&p| products[p].clone()).collect(),
            m: sub,
        })
    }

    pub fn country_degrees(&self) -> Vec<f64> {
        self.m.row_iter().map(|r| r.sum()).collect()
    }

    pub fn product_degrees(&self) -> Vec<f64> {
        self.m.column_iter().map(|c| c.sum()).collect()
    }
}

/// `M[c, p] = 1` iff `RCA[c, p] ≥ r_star` and the country passes the filters.
pub fn build_biadjacency(r: &RcaMatrix, r_star: f64, t: &TradeTable) -> Result<Biadjacency> {
    let m = DMatrix::from_fn(r.countries.len(), r.products.len(), |c, p| {
        (r.export[(c, p)] >= r_star && t.passes_filters(&r.countries[c])) as u8 as f64
    });
    Biadjacency::new(r.countries.clone(), r.products.clone(), m)
}

/// Head-incidence matrix of a trade hypergraph: node `i` is country
/// `names[i]` and every hyperedge copy is a product.
pub fn biadjacency_from_hypergraph(h: &DirectedHypergraph, names: &[String]) -> Result<Biadjacency> {
    let copies: Vec<&Hyperedge> = h.copies().collect();
    let mut m = DMatrix::zeros(h.node_count(), copies.len());
    for (p, e) in copies.iter().enumerate() {
        for &c in &e.head {
            m[(c as usize, p)] = 1.0;
        }
    }
    let countries = h
        .nodes()
        .iter()
        .map(|&id| {
            names.get(id as usize).cloned().ok_or_else(|| Error::InvalidArgument(format!("no name for node {id}")))
        })
        .collect::<Result<Vec<_>>>()?;
    let products = (0..copies.len()).map(|p| format!("p{p}")).collect();
    Biadjacency::new(countries, products, m)
}

/// One hyperedge per product; countries become node ids `0..` in name order.
pub fn trade_to_hypergraph(t: &TradeTable, year: i32, r_star: f64) -> Result<(DirectedHypergraph, Vec<String>)> {
    let r = rca(t, year)?;
    let keep: Vec<usize> = (0..r.countries.len()).filter(|&c| t.passes_filters(&r.countries[c])).collect();
    let names: Vec<String> = keep.iter().map(|&c| r.countries[c].clone()).collect();
    let mut edges = Vec::new();
    let mut dropped = 0;
    for p in 0..r.products.len() {
        let head: Vec<u32> = (0..keep.len()).filter(|&i| r.export[(keep[i], p)] > r_star).map(|i| i as u32).collect();
        let tail: Vec<u32> = (0..keep.len()).filter(|&i| r.import[(keep[i], p)] > r_star).map(|i| i as u32).collect();
        if head.is_empty() && tail.is_empty() {
            dropped += 1;
            continue;
        }
        edges.push(Hyperedge::new(head, tail, 1)?);
    }
    if dropped > 0 {
        log::info!("dropped {dropped} products with neither exporters nor importers");
    }
    let h = DirectedHypergraph::from_dense((0..names.len() as u64).collect(), edges)?;
    Ok((h, names))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProximityMatrix {
    pub w: DMatrix<f64>,
    pub x: DMatrix<f64>,
}

/// `W[c, p] = M[c, p] / (k_c h_p)` with `h_p = Σ_c M[c, p] / k_c`, and
/// `X = W Wᵀ` with a zero diagonal.
pub fn proximity(b: &Biadjacency) -> ProximityMatrix {
    let k = b.country_degrees();
    let m = &b.m;
    let h: Vec<f64> = (0..m.ncols()).map(|p| (0..m.nrows()).map(|c| m[(c, p)] / k[c]).sum()).collect();
    let w = DMatrix::from_fn(m.nrows(), m.ncols(), |c, p| m[(c, p)] / (k[c] * h[p]));
    let mut x = &w * w.transpose();
    x.fill_diagonal(0.0);
    ProximityMatrix { w, x }
}

fn standardize(v: &mut [f64]) {
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    let sd = (v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n).sqrt();
    for x in v.iter_mut() {
        *x = if sd > 0.0 { (*x - mean) / sd } else { 0.0 };
    }
}

fn eigen_desc(m: DMatrix<f64>) -> Result<(Vec<f64>, Vec<DVector<f64>>)> {
    let eig = SymmetricEigen::try_new(m, f64::EPSILON, 0)
        .ok_or_else(|| Error::Numeric("symmetric eigensolver did not converge".into()))?;
    let mut idx: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    idx.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    Ok((
        idx.iter().map(|&i| eig.eigenvalues[i]).collect(),
        idx.iter().map(|&i| eig.eigenvectors.column(i).into_owned()).collect(),
    ))
}

/// Matrix whose eigenvector gives the ECI.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum EciMethod {
    /// Leading non-trivial eigenvector of the country-country matrix
    /// implied by the coupled averaging equations.
    #[default]
    Coupled,
    /// Second eigenvector of the proximity matrix `X`.
    Proximity,
}

const GAP_TOLERANCE: f64 = 1e-10;

/// Standardized ECI of every country and PCI of every product.
pub fn eci_pci(b: &Biadjacency, method: EciMethod) -> Result<(Vec<f64>, Vec<f64>)> {
    let (nc, np) = (b.m.nrows(), b.m.ncols());
    if nc < 2 {
        return Err(Error::InvalidArgument("ECI needs at least two countries".into()));
    }
    let kc = b.country_degrees();
    let kp = b.product_degrees();
    let vector = match method {
        EciMethod::Coupled => {
            // S = D_c^{-1/2} M D_p^{-1} Mᵀ D_c^{-1/2} is similar to the
            // row-stochastic D_c^{-1} M D_p^{-1} Mᵀ; its eigenvalue-1
            // eigenvector D_c^{1/2}·1 is deflated before taking the top pair.
            let scaled = DMatrix::from_fn(nc, np, |c, p| b.m[(c, p)] / (kc[c].sqrt() * kp[p].sqrt()));
            let mut s = &scaled * scaled.transpose();
            let total: f64 = kc.iter().sum();
            let u = DVector::from_iterator(nc, kc.iter().map(|k| (k / total).sqrt()));
            s -= &u * u.transpose();
            let (vals, vecs) = eigen_desc(s)?;
            if vals.len() > 1 && (vals[0] - vals[1]).abs() <= GAP_TOLERANCE {
                return Err(Error::Numeric("ECI is not identifiable: repeated leading eigenvalue".into()));
            }
            vecs[0].iter().zip(&kc).map(|(x, k)| x / k.sqrt()).collect::<Vec<f64>>()
        }
        EciMethod::Proximity => {
            let (vals, vecs) = eigen_desc(proximity(b).x)?;
            let gap_before = (vals[0] - vals[1]).abs();
            let gap_after = vals.get(2).map_or(f64::INFINITY, |v| (vals[1] - v).abs());
            if gap_before <= GAP_TOLERANCE || gap_after <= GAP_TOLERANCE {
                return Err(Error::Numeric("ECI is not identifiable: repeated second eigenvalue".into()));
            }
            vecs[1].iter().copied().collect()
        }
    };
    let mut eci = vector;
    standardize(&mut eci);
    let mean_k = kc.iter().sum::<f64>() / nc as f64;
    let cov: f64 = eci.iter().zip(&kc).map(|(e, k)| e * (k - mean_k)).sum();
    if cov < 0.0 {
        eci.iter_mut().for_each(|x| *x = -*x);
    }
    let mut pci: Vec<f64> = (0..np).map(|p| (0..nc).map(|c| b.m[(c, p)] * eci[c]).sum::<f64>() / kp[p]).collect();
    standardize(&mut pci);
    Ok((eci, pci))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitnessConfig {
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for FitnessConfig {
    fn default() -> Self {
        FitnessConfig { tol: 1e-9, max_iter: 1000 }
    }
}

fn mean_normalize(v: &mut [f64]) {
    let mean = v.iter().sum::<f64>() / v.len() as f64;
    v.iter_mut().for_each(|x| *x /= mean);
}

fn max_relative_change(new: &[f64], old: &[f64]) -> f64 {
    new.iter().zip(old).map(|(a, b)| ((a - b) / a).abs()).fold(0.0, f64::max)
}

/// Fitness of countries and Quality of products from the given positive
/// starting vectors (all ones by default).
pub fn fitness_quality(
    b: &Biadjacency,
    cfg: &FitnessConfig,
    init: Option<(&[f64], &[f64])>,
) -> Result<(Vec<f64>, Vec<f64>)> {
    let (nc, np) = (b.m.nrows(), b.m.ncols());
    let (mut f, mut q) = match init {
        Some((f0, q0)) => {
            if f0.len() != nc || q0.len() != np || f0.iter().chain(q0).any(|&x| x.is_nan() || x <= 0.0) {
                return Err(Error::InvalidArgument("initial fitness/quality must be positive and sized".into()));
            }
            (f0.to_vec(), q0.to_vec())
        }
        None => (vec![1.0; nc], vec![1.0; np]),
    };
    let mut residual = f64::INFINITY;
    for _ in 0..cfg.max_iter {
        let mut nf: Vec<f64> = (0..nc).map(|c| (0..np).map(|p| b.m[(c, p)] * q[p]).sum()).collect();
        let mut nq: Vec<f64> = (0..np).map(|p| 1.0 / (0..nc).map(|c| b.m[(c, p)] / f[c]).sum::<f64>()).collect();
        mean_normalize(&mut nf);
        mean_normalize(&mut nq);
        if nf.iter().chain(&nq).any(|x| !x.is_finite() || *x <= 0.0) {
            return Err(Error::Numeric("fitness iteration reached a zero or non-finite value".into()));
        }
        residual = max_relative_change(&nf, &f).max(max_relative_change(&nq, &q));
        f = nf;
        q = nq;
        if residual < cfg.tol {
            return Ok((f, q));
        }
    }
    Err(Error::NotConverged { iterations: cfg.max_iter, residual })
}

/// GENEPY from the two largest eigenpairs of a symmetric matrix.
pub fn genepy(x: &DMatrix<f64>) -> Result<Vec<f64>> {
    let n = x.nrows();
    if n != x.ncols() {
        return Err(Error::InvalidArgument("GENEPY needs a square matrix".into()));
    }
    if x.iter().all(|&v| v == 0.0) {
        return Ok(vec![0.0; n]);
    }
    if n < 2 {
        return Err(Error::InvalidArgument("GENEPY needs at least two countries".into()));
    }
    let (vals, vecs) = eigen_desc(x.clone())?;
    if vals[1] < 0.0 {
        log::warn!("second eigenvalue of the proximity matrix is negative ({})", vals[1]);
    }
    Ok((0..n)
        .map(|c| {
            let lin: f64 = (0..2).map(|i| vals[i] * vecs[i][c].powi(2)).sum();
            let sq: f64 = (0..2).map(|i| vals[i].powi(2) * vecs[i][c].powi(2)).sum();
            lin * lin + 2.0 * sq
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComplexityScores {
    pub countries: Vec<String>,
    pub eci: Vec<f64>,
    /// `None` when the Fitness iteration did not converge.
    pub fitness: Option<Vec<f64>>,
    pub genepy: Vec<f64>,
    pub products: Vec<String>,
    pub pci: Vec<f64>,
    pub quality: Option<Vec<f64>>,
}

pub fn complexity_scores(b: &Biadjacency, method: EciMethod, fit: &FitnessConfig) -> Result<ComplexityScores> {
    let (eci, pci) = eci_pci(b, method)?;
    let (fitness, quality) = match fitness_quality(b, fit, None) {
        Ok((f, q)) => (Some(f), Some(q)),
        Err(e @ (Error::NotConverged { .. } | Error::Numeric(_))) => {
            log::warn!("fitness: {e}");
            (None, None)
        }
        Err(e) => return Err(e),
    };
    Ok(ComplexityScores {
        countries: b.countries.clone(),
        eci,
        fitness,
        genepy: genepy(&proximity(b).x)?,
        products: b.products.clone(),
        pci,
        quality,
    })
}

/// Mean and population standard deviation of rank correlations between an
/// observed score and its counterpart in each sample, over the countries
/// present in both.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RankSummary {
    pub spearman_mean: f64,
    pub spearman_std: f64,
    pub kendall_mean: f64,
    pub kendall_std: f64,
    pub samples: usize,
}

fn mean_std(v: &[f64]) -> (f64, f64) {
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    (mean, (v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n).sqrt())
}

pub fn rank_compare(
    observed_names: &[String],
    observed: &[f64],
    samples: &[(Vec<String>, Vec<f64>)],
) -> Result<RankSummary> {
    if samples.is_empty() {
        return Err(Error::InvalidArgument("rank comparison without samples".into()));
    }
    let obs: BTreeMap<&str, f64> = observed_names.iter().map(String::as_str).zip(observed.iter().copied()).collect();
    let (mut sp, mut kt) = (Vec::new(), Vec::new());
    for (names, scores) in samples {
        let (mut x, mut y) = (Vec::new(), Vec::new());
        let sample: BTreeMap<&str, f64> = names.iter().map(String::as_str).zip(scores.iter().copied()).collect();
        for (name, &o) in &obs {
            if let Some(&s) = sample.get(name) {
                x.push(o);
                y.push(s);
            }
        }
        sp.push(spearman(&x, &y)?);
        kt.push(kendall_tau(&x, &y)?);
    }
    let (spearman_mean, spearman_std) = mean_std(&sp);
    let (kendall_mean, kendall_std) = mean_std(&kt);
    Ok(RankSummary { spearman_mean, spearman_std, kendall_mean, kendall_std, samples: samples.len() })
}

/// Random 0/1 matrix with every row and column non-empty, for self-checks.
pub fn random_biadjacency(rng: &mut crate::rng::Rng, countries: usize, products: usize, density: f64) -> Biadjacency {
    use rand::Rng as _;
    let mut m = DMatrix::from_fn(countries, products, |_, _| rng.random_bool(density) as u8 as f64);
    for c in 0..countries {
        if m.row(c).sum() == 0.0 {
            m[(c, rng.random_range(0..products))] = 1.0;
        }
    }
    for p in 0..products {
        if m.column(p).sum() == 0.0 {
            m[(rng.random_range(0..countries), p)] = 1.0;
        }
    }
    let names = |prefix: &str, n: usize| (0..n).map(|i| format!("{prefix}{i:03}")).collect();
    Biadjacency::new(names("c", countries), names("p", products), m).expect("non-empty by construction")
}

/// ECI by power iteration on the coupled equations with z-scoring after
/// every step.
pub fn eci_by_iteration(b: &Biadjacency, iterations: usize) -> Vec<f64> {
    let kc = b.country_degrees();
    let kp = b.product_degrees();
    let (nc, np) = (b.m.nrows(), b.m.ncols());
    let mut e: Vec<f64> = kc.clone();
    standardize(&mut e);
    for _ in 0..iterations {
        let pci: Vec<f64> = (0..np).map(|p| (0..nc).map(|c| b.m[(c, p)] * e[c]).sum::<f64>() / kp[p]).collect();
        e = (0..nc).map(|c| (0..np).map(|p| b.m[(c, p)] * pci[p]).sum::<f64>() / kc[c]).collect();
        standardize(&mut e);
    }
    let mean_k = kc.iter().sum::<f64>() / nc as f64;
    if e.iter().zip(&kc).map(|(x, k)| x * (k - mean_k)).sum::<f64>() < 0.0 {
        e.iter_mut().for_each(|x| *x = -*x);
    }
    e
}
