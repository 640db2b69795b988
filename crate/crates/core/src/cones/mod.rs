//! Polyhedral cones cut out by entropy inequalities.

mod cache;
mod dd;
mod face;
mod families;
mod io;
mod lp;

use std::sync::OnceLock;

use sha2::{Digest, Sha256};

pub use cache::{RayCache, CACHE_ENV};
pub use dd::{check_pointed, extreme_rays_of, DdCheckpoint, DdProgress};
pub use face::{minimal_face_containing, Face};
pub use families::{family_label, generate_inequalities, parse_families, raw_instances, InequalityFamily};
pub use io::MatrixFile;
pub use lp::{lp_feasible, LpOutcome};

pub(crate) use families::{canonical_rows, generate_int};

use crate::entropy_space::{EntropyVector, LinearFunctional, PartyCount};
use crate::error::{Error, Result};
use crate::exact;

/// Extreme ray generator: primitive integer vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Ray(pub(crate) Vec<i64>);

impl Ray {
    pub fn new(mut point: Vec<i64>) -> Result<Self> {
        if point.iter().all(|&x| x == 0) {
            return Err(Error::Parse("zero vector is not a ray".into()));
        }
        exact::make_primitive(&mut point);
        Ok(Ray(point))
    }

    pub fn point(&self) -> &[i64] {
        &self.0
    }

    pub fn to_vector(&self, n: PartyCount) -> EntropyVector {
        EntropyVector::from_integers(n, &self.0).expect("ray has entropy-space dimension")
    }
}

/// Cone `{S : <f, S> >= 0 for all f in hrep}` with lazily computed rays.
#[derive(Debug)]
pub struct Cone {
    n: PartyCount,
    label: String,
    rows: Vec<Vec<i64>>,
    hrep: Vec<LinearFunctional>,
    /// Families of a sub-cone whose rays seed double description.
    base: Option<Vec<InequalityFamily>>,
    rays: OnceLock<Vec<Ray>>,
}

impl Clone for Cone {
    fn clone(&self) -> Self {
        let rays = OnceLock::new();
        if let Some(r) = self.rays.get() {
            let _ = rays.set(r.clone());
        }
        Cone {
            n: self.n,
            label: self.label.clone(),
            rows: self.rows.clone(),
            hrep: self.hrep.clone(),
            base: self.base.clone(),
            rays,
        }
    }
}

impl Cone {
    /// Cone from explicit normals; they are rescaled to primitive integers,
    /// deduplicated and sorted.
    pub fn new(n: PartyCount, hrep: &[LinearFunctional]) -> Result<Self> {
        let mut rows = Vec::with_capacity(hrep.len());
        for f in hrep {
            if f.dim() != n.dim() {
                return Err(Error::Dimension {
                    expected: n.dim(),
                    found: f.dim(),
                });
            }
            rows.push(f.to_i64().ok_or(Error::Overflow)?);
        }
        Cone::from_rows(n, String::new(), canonical_rows(rows))
    }

    /// Cone of the listed families. When extra families are added to SA and
    /// SSA, double description starts from the rays of the SA/SSA sub-cone:
    /// the extra rows only cut it, which keeps intermediate ray sets small.
    pub fn from_families(n: PartyCount, families: &[InequalityFamily]) -> Result<Self> {
        let mut cone = Cone::from_rows(n, family_label(families), generate_int(n, families))?;
        let base: Vec<InequalityFamily> = families
            .iter()
            .copied()
            .filter(|f| matches!(f, InequalityFamily::Sa | InequalityFamily::Ssa))
            .collect();
        if !base.is_empty() && family_label(&base) != cone.label {
            cone.base = Some(base);
        }
        Ok(cone)
    }

    fn from_rows(n: PartyCount, label: String, rows: Vec<Vec<i64>>) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::EmptyHrep);
        }
        let hrep = rows.iter().map(|r| LinearFunctional::from_integers(r)).collect();
        Ok(Cone {
            n,
            label,
            rows,
            hrep,
            base: None,
            rays: OnceLock::new(),
        })
    }

    pub fn parties(&self) -> PartyCount {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.n.dim()
    }

    /// Comma-separated family names, empty for custom cones.
    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn hrep(&self) -> &[LinearFunctional] {
        &self.hrep
    }

    pub fn int_rows(&self) -> &[Vec<i64>] {
        &self.rows
    }

    pub fn content_hash(&self) -> String {
        let mut h = Sha256::new();
        h.update(format!("n={}\n", self.n));
        for r in &self.rows {
            let line: Vec<String> = r.iter().map(ToString::to_string).collect();
            h.update(line.join(" "));
            h.update("\n");
        }
        hex::encode(h.finalize())
    }

    pub fn satisfies(&self, point: &[i64]) -> bool {
        point.len() == self.dim() && self.rows.iter().all(|r| exact::dot_i64(r, point) >= 0)
    }

    pub fn contains(&self, v: &EntropyVector) -> bool {
        v.parties() == self.n
            && self.hrep.iter().all(|f| {
                crate::entropy_space::eval_functional(f, v)
                    .is_ok_and(|x| x >= num_rational::BigRational::from_integer(0.into()))
            })
    }

    pub fn is_pointed(&self) -> bool {
        check_pointed(&self.rows, self.dim()).is_ok()
    }

    /// Installs rays computed elsewhere (e.g. loaded from a cache).
    pub fn with_rays(self, rays: Vec<Ray>) -> Self {
        let _ = self.rays.set(rays);
        self
    }

    pub fn cached_rays(&self) -> Option<&[Ray]> {
        self.rays.get().map(Vec::as_slice)
    }

    /// Extreme rays, computed on first use.
    pub fn rays(&self) -> Result<&[Ray]> {
        if let Some(r) = self.rays.get() {
            return Ok(r);
        }
        let r = self.compute_rays(None)?;
        let _ = self.rays.set(r);
        Ok(self.rays.get().unwrap())
    }

    /// Extreme rays, going through `cache` and resuming from its checkpoint.
    pub fn rays_cached(&self, cache: &RayCache) -> Result<&[Ray]> {
        if let Some(r) = self.rays.get() {
            return Ok(r);
        }
        let rays = match cache.load(self)? {
            Some(r) => r,
            None => {
                let rays = self.compute_rays(Some(cache))?;
                cache.store(self, &rays)?;
                rays
            }
        };
        let _ = self.rays.set(rays);
        Ok(self.rays.get().unwrap())
    }

    /// Checkpoint holding the rays of the base sub-cone, if there is one.
    fn seed(&self, cache: Option<&RayCache>) -> Result<Option<DdCheckpoint>> {
        let Some(fams) = &self.base else { return Ok(None) };
        let base = Cone::from_families(self.n, fams)?;
        if !base.is_pointed() {
            return Ok(None);
        }
        let rays = match cache {
            Some(c) => base.rays_cached(c)?,
            None => base.rays()?,
        };
        let processed = self
            .rows
            .iter()
            .enumerate()
            .filter(|(_, r)| base.rows.binary_search(r).is_ok())
            .map(|(i, _)| i)
            .collect();
        let rays = rays
            .iter()
            .map(|r| r.0.iter().map(ToString::to_string).collect())
            .collect();
        Ok(Some(DdCheckpoint { processed, rays }))
    }

    fn compute_rays(&self, cache: Option<&RayCache>) -> Result<Vec<Ray>> {
        let resume = match cache {
            Some(c) => c.load_checkpoint(self)?,
            None => None,
        };
        let resume = match resume {
            Some(ck) => Some(ck),
            None => self.seed(cache)?,
        };
        let points = match cache {
            Some(c) => extreme_rays_of(&self.rows, self.dim(), resume.as_ref(), &mut c.checkpointer(self))?,
            None => extreme_rays_of(&self.rows, self.dim(), resume.as_ref(), &mut |_| {})?,
        };
        Ok(points.into_iter().map(Ray).collect())
    }
}

/// Extreme rays of a pointed cone in lexicographic order.
pub fn extreme_rays(cone: &Cone) -> Result<Vec<Ray>> {
    cone.compute_rays(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use InequalityFamily::*;

    fn n(k: usize) -> PartyCount {
        PartyCount::new(k).unwrap()
    }

    #[test]
    fn sa_cone_rays_are_bell_pairs() {
        let cone = Cone::from_families(n(2), &[Sa]).unwrap();
        let rays: Vec<Vec<i64>> = cone.rays().unwrap().iter().map(|r| r.point().to_vec()).collect();
        assert_eq!(rays, vec![vec![0, 1, 1], vec![1, 0, 1], vec![1, 1, 0]]);
    }

    #[test]
    fn orthant_cone() {
        let hrep: Vec<LinearFunctional> = (0..7)
            .map(|i| {
                let mut c = vec![0; 7];
                c[i] = 1;
                LinearFunctional::from_integers(&c)
            })
            .collect();
        let cone = Cone::new(n(3), &hrep).unwrap();
        assert_eq!(cone.rays().unwrap().len(), 7);
    }

    #[test]
    fn empty_and_non_pointed() {
        assert!(matches!(Cone::from_families(n(1), &[Sa]), Err(Error::EmptyHrep)));
        let cone = Cone::new(n(2), &[LinearFunctional::from_integers(&[1, 0, 0])]).unwrap();
        assert!(!cone.is_pointed());
        assert!(matches!(cone.rays(), Err(Error::NotPointed { .. })));
    }

    #[test]
    fn minimal_faces_of_sa_cone() {
        let cone = Cone::from_families(n(2), &[Sa]).unwrap();
        let rays = cone.rays().unwrap();
        let i = rays.iter().position(|r| r.point() == [1, 1, 0]).unwrap();
        let j = rays.iter().position(|r| r.point() == [1, 0, 1]).unwrap();
        let face = minimal_face_containing(&cone, &[i, j]).unwrap();
        // rows are sorted: [-1,1,1], [1,-1,1], [1,1,-1]; only I(2:3) = row 0 is tight
        assert_eq!(face.tight.iter().collect::<Vec<_>>(), vec![0]);
        assert_eq!(face.generators, vec![i.min(j), i.max(j)]);
        let single = minimal_face_containing(&cone, &[i]).unwrap();
        assert_eq!(single.generators, vec![i]);
        let whole = minimal_face_containing(&cone, &[0, 1, 2]).unwrap();
        assert!(whole.tight.is_empty());
        assert_eq!(whole.generators.len(), 3);
        assert!(matches!(
            minimal_face_containing(&cone, &[]),
            Err(Error::EmptySelection)
        ));
    }

    #[test]
    fn cache_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let cache = RayCache::new(dir.path());
        let cone = Cone::from_families(n(3), &[Sa, Ssa]).unwrap();
        let first = cone.rays_cached(&cache).unwrap().to_vec();
        assert!(cache.rays_path(&cone).exists());
        let again = Cone::from_families(n(3), &[Sa, Ssa]).unwrap();
        assert_eq!(cache.load(&again).unwrap().unwrap(), first);
        assert!(cache.clone().force_recompute(true).load(&again).unwrap().is_none());
    }
}
