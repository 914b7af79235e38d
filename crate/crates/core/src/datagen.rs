//! Seeded Gaussian-mixture generators and the named benchmark fixtures.
//!
//! Samples come from a ChaCha8 stream: standard normals by the Box–Muller
//! transform (both outputs used, in order), shaped by the lower Cholesky
//! factor of each covariance. Component samples are drawn first, in
//! component order, then the uniform noise points.

use nalgebra::{DMatrix, DVector};
use ndarray::Array2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::types::DataSet;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Component {
    pub mean: Vec<f64>,
    pub covariance: Vec<Vec<f64>>,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NoiseBox {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MixtureSpec {
    pub components: Vec<Component>,
    #[serde(default)]
    pub noise_count: usize,
    /// Defaults to the bounding box of the component samples.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub noise_box: Option<NoiseBox>,
    #[serde(default)]
    pub seed: u64,
}

impl MixtureSpec {
    /// Components with covariance `var * I`.
    pub fn isotropic(components: &[(Vec<f64>, f64, usize)], noise_count: usize, seed: u64) -> Self {
        MixtureSpec {
            components: components
                .iter()
                .map(|(mean, var, count)| {
                    let l = mean.len();
                    let covariance = (0..l)
                        .map(|r| (0..l).map(|c| if r == c { *var } else { 0.0 }).collect())
                        .collect();
                    Component {
                        mean: mean.clone(),
                        covariance,
                        count: *count,
                    }
                })
                .collect(),
            noise_count,
            noise_box: None,
            seed,
        }
    }

    fn dim(&self) -> Result<usize> {
        let l = self
            .components
            .first()
            .map(|c| c.mean.len())
            .ok_or_else(|| Error::InvalidConfig("mixture has no components".into()))?;
        if l == 0 {
            return Err(Error::InvalidConfig("component means must be non-empty".into()));
        }
        for (k, c) in self.components.iter().enumerate() {
            if c.mean.len() != l || c.covariance.len() != l || c.covariance.iter().any(|r| r.len() != l) {
                return Err(Error::DimensionMismatch(format!("component {k} does not match dimension {l}")));
            }
        }
        Ok(l)
    }
}

struct NormalStream {
    rng: ChaCha8Rng,
    spare: Option<f64>,
}

impl NormalStream {
    fn new(seed: u64) -> Self {
        NormalStream {
            rng: ChaCha8Rng::seed_from_u64(seed),
            spare: None,
        }
    }

    fn next(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        // 1 - U keeps the log argument in (0, 1]
        let u1: f64 = 1.0 - self.rng.gen::<f64>();
        let u2: f64 = self.rng.gen::<f64>();
        let r = (-2.0 * u1.ln()).sqrt();
        let t = std::f64::consts::TAU * u2;
        self.spare = Some(r * t.sin());
        r * t.cos()
    }

    fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.rng.gen::<f64>()
    }
}

/// Draws the mixture. Component `k` gets label `k + 1`, noise gets `0`;
/// the truth centers are the component means.
pub fn generate(spec: &MixtureSpec) -> Result<DataSet> {
    let l = spec.dim()?;
    let total: usize = spec.components.iter().map(|c| c.count).sum::<usize>() + spec.noise_count;
    let mut stream = NormalStream::new(spec.seed);
    let mut points = Vec::with_capacity(total * l);
    let mut labels = Vec::with_capacity(total);

    for (k, c) in spec.components.iter().enumerate() {
        let cov = DMatrix::from_fn(l, l, |r, col| c.covariance[r][col]);
        if (0..l).any(|r| (0..l).any(|col| (cov[(r, col)] - cov[(col, r)]).abs() > 1e-12 * (1.0 + cov[(r, col)].abs()))) {
            return Err(Error::InvalidConfig(format!("covariance of component {k} is not symmetric")));
        }
        let chol = cov
            .cholesky()
            .ok_or_else(|| Error::InvalidConfig(format!("covariance of component {k} is not positive definite")))?;
        let factor = chol.l();
        let mean = DVector::from_column_slice(&c.mean);
        for _ in 0..c.count {
            let z = DVector::from_fn(l, |_, _| stream.next());
            let x = &mean + &factor * z;
            points.extend(x.iter());
            labels.push(k + 1);
        }
    }

    if spec.noise_count > 0 {
        let (lo, hi) = match &spec.noise_box {
            Some(b) => {
                if b.lo.len() != l || b.hi.len() != l {
                    return Err(Error::DimensionMismatch("noise box dimension".into()));
                }
                (b.lo.clone(), b.hi.clone())
            }
            None => {
                if labels.is_empty() {
                    return Err(Error::InvalidConfig("noise box needed when there are no component samples".into()));
                }
                let mut lo = vec![f64::INFINITY; l];
                let mut hi = vec![f64::NEG_INFINITY; l];
                for row in points.chunks(l) {
                    for k in 0..l {
                        lo[k] = lo[k].min(row[k]);
                        hi[k] = hi[k].max(row[k]);
                    }
                }
                (lo, hi)
            }
        };
        for _ in 0..spec.noise_count {
            for k in 0..l {
                points.push(stream.uniform(lo[k], hi[k]));
            }
            labels.push(0);
        }
    }

    let n = labels.len();
    let points = Array2::from_shape_vec((n, l), points).expect("n * l samples");
    let centers = Array2::from_shape_vec(
        (spec.components.len(), l),
        spec.components.iter().flat_map(|c| c.mean.iter().copied()).collect(),
    )
    .expect("one mean per component");
    DataSet::new(points)?.with_labels(labels)?.with_centers(centers)
}

/// Two overlapping Gaussians of unequal density, means `(0,0)` and
/// `(d,d)`, covariance `0.4 I`.
fn two_blobs(offset: f64, counts: (usize, usize), seed: u64) -> MixtureSpec {
    MixtureSpec::isotropic(
        &[(vec![0.0, 0.0], 0.4, counts.0), (vec![offset, offset], 0.4, counts.1)],
        0,
        seed,
    )
}

pub fn example1(seed: u64) -> MixtureSpec {
    two_blobs(1.5, (2000, 1000), seed)
}

pub fn example2(seed: u64) -> MixtureSpec {
    two_blobs(2.0, (2000, 1000), seed)
}

pub fn example3(seed: u64) -> MixtureSpec {
    two_blobs(1.5, (2000, 500), seed)
}

pub fn example4(seed: u64) -> MixtureSpec {
    two_blobs(2.0, (2000, 500), seed)
}

/// A wide sparse cluster, a mid-sized one, and a very tight dense one next
/// to it: 200 + 100 + 5000 points.
#[allow(clippy::approx_constant)] // 6.28 is a coordinate
pub fn experiment2(seed: u64) -> MixtureSpec {
    MixtureSpec::isotropic(
        &[
            (vec![0.27, 7.99], 3.0, 200),
            (vec![6.28, 1.49], 0.5, 100),
            (vec![7.81, 3.76], 0.01, 5000),
        ],
        0,
        seed,
    )
}

/// `experiment2` plus 50 uniform noise points over the data bounding box.
pub fn experiment3(seed: u64) -> MixtureSpec {
    MixtureSpec {
        noise_count: 50,
        ..experiment2(seed)
    }
}

const EXPERIMENT1_POINTS: [[f64; 2]; 17] = [
    [1.5, 3.5],
    [2.0, 3.5],
    [1.0, 3.0],
    [1.5, 3.0],
    [2.0, 3.0],
    [2.5, 3.0],
    [1.0, 2.5],
    [1.5, 2.5],
    [2.0, 2.5],
    [2.5, 2.5],
    [1.5, 2.0],
    [2.0, 2.0],
    [4.25, 3.5],
    [3.5, 2.75],
    [4.25, 2.75],
    [5.0, 2.75],
    [4.25, 2.0],
];

/// The 17-point two-cluster set (12 + 5 points).
pub fn experiment1_fixture() -> DataSet {
    let points = Array2::from_shape_vec((17, 2), EXPERIMENT1_POINTS.iter().flatten().copied().collect())
        .expect("17 x 2");
    let labels = (0..17).map(|i| if i < 12 { 1 } else { 2 }).collect();
    DataSet::new(points)
        .and_then(|d| d.with_labels(labels))
        .and_then(|d| d.with_centers(ndarray::array![[1.75, 2.75], [4.25, 2.75]]))
        .expect("fixture is valid")
}

pub const FIXTURE_NAMES: [&str; 7] = [
    "experiment1",
    "example1",
    "example2",
    "example3",
    "example4",
    "experiment2",
    "experiment3",
];

/// Looks up a named fixture; `seed` is ignored by `experiment1`.
pub fn fixture(name: &str, seed: u64) -> Result<DataSet> {
    let spec = match name {
        "experiment1" => return Ok(experiment1_fixture()),
        "example1" => example1(seed),
        "example2" => example2(seed),
        "example3" => example3(seed),
        "example4" => example4(seed),
        "experiment2" => experiment2(seed),
        "experiment3" => experiment3(seed),
        other => {
            return Err(Error::InvalidConfig(format!(
                "unknown fixture `{other}`; expected one of {}",
                FIXTURE_NAMES.join(", ")
            )))
        }
    };
    generate(&spec)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixture_sizes() {
        assert_eq!(generate(&example1(1)).unwrap().len(), 3000);
        assert_eq!(generate(&example3(1)).unwrap().len(), 2500);
        let e2 = generate(&experiment2(1)).unwrap();
        assert_eq!(e2.len(), 5300);
        assert_eq!(e2.true_class_count(), Some(3));
        let e3 = generate(&experiment3(1)).unwrap();
        assert_eq!(e3.len(), 5350);
        assert_eq!(e3.truth_labels.as_ref().unwrap().iter().filter(|&&l| l == 0).count(), 50);
    }

    #[test]
    fn singleton_mixture() {
        let d = generate(&MixtureSpec::isotropic(
            &[(vec![0.0, 0.0], 1.0, 0), (vec![1.0, 1.0], 1.0, 1)],
            0,
            9,
        ))
        .unwrap();
        assert_eq!(d.len(), 1);
        assert_eq!(d.truth_labels, Some(vec![2]));
    }

    #[test]
    fn same_seed_same_data() {
        let a = generate(&experiment3(42)).unwrap();
        let b = generate(&experiment3(42)).unwrap();
        assert_eq!(a, b);
        assert_ne!(a.points, generate(&experiment3(43)).unwrap().points);
    }

    #[test]
    fn noise_stays_in_box() {
        let d = generate(&experiment3(5)).unwrap();
        let labels = d.truth_labels.as_ref().unwrap();
        let clean: Vec<usize> = (0..d.len()).filter(|&i| labels[i] != 0).collect();
        let clean = DataSet::new(d.points.select(ndarray::Axis(0), &clean)).unwrap();
        let (lo, hi) = clean.bounding_box();
        for (i, row) in d.points.rows().into_iter().enumerate() {
            if labels[i] == 0 {
                for k in 0..2 {
                    assert!(row[k] >= lo[k] && row[k] <= hi[k]);
                }
            }
        }
    }

    #[test]
    fn sample_means_are_close() {
        let spec = experiment2(11);
        let d = generate(&spec).unwrap();
        let labels = d.truth_labels.as_ref().unwrap();
        for (k, c) in spec.components.iter().enumerate() {
            let idx: Vec<usize> = (0..d.len()).filter(|&i| labels[i] == k + 1).collect();
            let sigma = c.covariance[0][0].sqrt();
            let bound = 4.0 * sigma / (c.count as f64).sqrt();
            for dim in 0..2 {
                let mean = idx.iter().map(|&i| d.points[[i, dim]]).sum::<f64>() / idx.len() as f64;
                assert!((mean - c.mean[dim]).abs() < bound, "component {k} dim {dim}");
            }
        }
    }

    #[test]
    fn correlated_covariance() {
        let spec = MixtureSpec {
            components: vec![Component {
                mean: vec![0.0, 0.0],
                covariance: vec![vec![1.0, 0.8], vec![0.8, 1.0]],
                count: 20_000,
            }],
            noise_count: 0,
            noise_box: None,
            seed: 3,
        };
        let d = generate(&spec).unwrap();
        let n = d.len() as f64;
        let cov = d.points.column(0).dot(&d.points.column(1)) / n;
        assert!((cov - 0.8).abs() < 0.05, "{cov}");
    }

    #[test]
    fn rejects_bad_covariance() {
        let mut spec = MixtureSpec::isotropic(&[(vec![0.0, 0.0], 1.0, 5)], 0, 1);
        spec.components[0].covariance = vec![vec![1.0, 2.0], vec![2.0, 1.0]];
        assert!(matches!(generate(&spec), Err(Error::InvalidConfig(_))));
        spec.components[0].covariance = vec![vec![1.0, 0.5], vec![0.0, 1.0]];
        assert!(generate(&spec).is_err());
    }

    #[test]
    fn experiment1_layout() {
        let d = experiment1_fixture();
        assert_eq!(d.len(), 17);
        let labels = d.truth_labels.as_ref().unwrap();
        assert_eq!(labels.iter().filter(|&&l| l == 1).count(), 12);
        assert_eq!(labels.iter().filter(|&&l| l == 2).count(), 5);
        for (class, expect) in [(1, [1.75, 2.75]), (2, [4.25, 2.75])] {
            let idx: Vec<usize> = (0..17).filter(|&i| labels[i] == class).collect();
            for dim in 0..2 {
                let mean = idx.iter().map(|&i| d.points[[i, dim]]).sum::<f64>() / idx.len() as f64;
                assert!((mean - expect[dim]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn spec_json_round_trip() {
        let spec = experiment3(7);
        let text = serde_json::to_string(&spec).unwrap();
        assert_eq!(serde_json::from_str::<MixtureSpec>(&text).unwrap(), spec);
    }
}
