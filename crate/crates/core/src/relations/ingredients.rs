//! Shared immutable inputs of a verification run: associators, built-in
//! maps and the `U(t4)` backend.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use rayon::prelude::*;

use super::mobius::{alphabet_for, named_map};
use crate::alphabet::Alphabet;
use crate::dsl::{Context, BUILTIN_MAPS};
use crate::error::{contract, Result};
use crate::holonomy::{compute_cached, Associator, AssociatorKind, HolonomyParams};
use crate::hom::GeneratorMap;
use crate::series::{Algebra, Series};
use crate::t4algebra::{t4_alphabet, NormalFormBackend, NormalFormTable, ResourceGuard};

/// Associator named `Psi<N>`, `Phi` or `PhiHalf`.
pub fn associator_kind(name: &str) -> Option<AssociatorKind> {
    match name {
        "Phi" => Some(AssociatorKind::Phi),
        "PhiHalf" => Some(AssociatorKind::PhiHalf),
        _ => {
            let n: usize = name.strip_prefix("Psi")?.parse().ok()?;
            (n >= 1 && name == format!("Psi{n}")).then_some(AssociatorKind::Psi(n))
        }
    }
}

/// Alphabet an associator lives over.
pub fn associator_alphabet(kind: AssociatorKind) -> Result<Arc<Alphabet>> {
    match kind {
        AssociatorKind::Psi(n) => crate::alphabet::cyclotomic(n),
        _ => Ok(crate::alphabet::kz()),
    }
}

/// What a run needs: each associator to some degree, and the `U(t4)` table.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Requirements {
    pub associators: BTreeMap<String, usize>,
    pub t4_degree: Option<usize>,
}

impl Requirements {
    pub fn need(&mut self, name: &str, degree: usize) {
        let d = self.associators.entry(name.to_string()).or_insert(degree);
        *d = (*d).max(degree);
    }

    pub fn need_t4(&mut self, degree: usize) {
        self.t4_degree = Some(self.t4_degree.map_or(degree, |d| d.max(degree)));
    }
}

/// Computed associators, built-in maps and the optional `U(t4)` backend.
#[derive(Clone, Debug)]
pub struct Ingredients {
    prec: usize,
    terms: usize,
    associators: BTreeMap<String, Associator>,
    maps: BTreeMap<String, GeneratorMap>,
    t4: Option<Arc<NormalFormBackend>>,
}

impl Ingredients {
    /// Computes everything in `req` (associators in parallel).
    pub fn build(req: &Requirements, prec: usize, terms: usize, cache: Option<&Path>, guard: ResourceGuard) -> Result<Self> {
        let jobs: Vec<(String, AssociatorKind, usize)> = req
            .associators
            .iter()
            .map(|(name, &d)| {
                associator_kind(name)
                    .map(|k| (name.clone(), k, d))
                    .ok_or_else(|| contract(format!("`{name}` is not an associator")))
            })
            .collect::<Result<_>>()?;
        let t4 = || -> Result<Option<Arc<NormalFormBackend>>> {
            match req.t4_degree {
                None => Ok(None),
                Some(d) => {
                    let table = NormalFormTable::load_or_build(d, cache, guard)?;
                    Ok(Some(Arc::new(NormalFormBackend::new(Arc::new(table), prec))))
                }
            }
        };
        let (assocs, t4) = rayon::join(
            || {
                jobs.par_iter()
                    .map(|(name, kind, d)| {
                        let params = HolonomyParams::new(*d, prec, terms);
                        compute_cached(*kind, &params, cache).map(|a| (name.clone(), a))
                    })
                    .collect::<Result<BTreeMap<_, _>>>()
            },
            t4,
        );
        let maps = BUILTIN_MAPS.iter().chain(["rho"].iter()).map(|m| Ok((m.to_string(), named_map(m)?))).collect::<Result<_>>()?;
        Ok(Self { prec, terms, associators: assocs?, maps, t4: t4? })
    }

    pub fn prec(&self) -> usize {
        self.prec
    }

    pub fn terms(&self) -> usize {
        self.terms
    }

    pub fn associators(&self) -> &BTreeMap<String, Associator> {
        &self.associators
    }

    pub fn associator(&self, name: &str) -> Result<&Associator> {
        self.associators.get(name).ok_or_else(|| contract(format!("associator `{name}` was not computed")))
    }

    /// Replaces an associator's series (used to inject faults).
    pub fn replace_series(&mut self, name: &str, series: Series) -> Result<()> {
        let a = self.associators.get_mut(name).ok_or_else(|| contract(format!("associator `{name}` was not computed")))?;
        if **series.alphabet() != **a.series.alphabet() {
            return Err(contract("replacement series lives over a different alphabet"));
        }
        a.series = series;
        Ok(())
    }

    pub fn map(&self, name: &str) -> Result<&GeneratorMap> {
        self.maps.get(name).ok_or_else(|| contract(format!("no built-in map `{name}`")))
    }

    pub fn t4(&self) -> Option<&Arc<NormalFormBackend>> {
        self.t4.as_ref()
    }

    /// `name` truncated to `d`.
    pub fn series_at(&self, name: &str, d: usize) -> Result<Series> {
        self.associator(name)?.series.truncate(d)
    }

    /// Largest a-priori tail bound among `names`.
    pub fn tail_bound(&self, names: &[String]) -> f64 {
        names.iter().filter_map(|n| self.associators.get(n)).map(|a| a.tail_bound).fold(0.0, f64::max)
    }

    /// Free algebra over the alphabet for `N` (`N = 1` is `A, B`).
    pub fn free_algebra(&self, n: usize, d: usize) -> Result<Algebra> {
        Ok(Algebra::free(alphabet_for(n)?, d, self.prec))
    }

    /// `U(t4)` truncated at `d`.
    pub fn t4_algebra(&self, d: usize) -> Result<Algebra> {
        let b = self.t4.as_ref().ok_or_else(|| contract("the U(t4) table was not built"))?;
        Algebra::normal_form(b.clone(), d)
    }

    /// Candidate ambient algebras at degree `d`: `f2`, `f3`, `f5`, other
    /// cyclotomic alphabets in use, then `U(t4)` if available.
    pub fn context(&self, d: usize) -> Result<RunContext<'_>> {
        let mut algebras = vec![self.free_algebra(1, d)?, self.free_algebra(2, d)?, self.free_algebra(4, d)?];
        for a in self.associators.values() {
            if !algebras.iter().any(|x| **x.alphabet() == **a.series.alphabet()) {
                algebras.push(Algebra::free(a.series.alphabet().clone(), d, self.prec));
            }
        }
        if let Some(b) = &self.t4 {
            if d <= b.degree() {
                algebras.push(Algebra::normal_form(b.clone(), d)?);
            }
        }
        Ok(RunContext { ing: self, algebras })
    }
}

/// [`Context`] over borrowed ingredients.
pub struct RunContext<'a> {
    ing: &'a Ingredients,
    algebras: Vec<Algebra>,
}

impl Context for RunContext<'_> {
    fn series(&self, name: &str) -> Option<&Series> {
        self.ing.associators.get(name).map(|a| &a.series)
    }

    fn map(&self, name: &str) -> Option<&GeneratorMap> {
        self.ing.maps.get(name)
    }

    fn algebras(&self) -> &[Algebra] {
        &self.algebras
    }
}

/// Alphabet-only stand-in used to plan a run before anything is computed.
pub(crate) struct ProbeContext {
    series: BTreeMap<String, Series>,
    maps: BTreeMap<String, GeneratorMap>,
    algebras: Vec<Algebra>,
}

impl ProbeContext {
    pub(crate) fn new(names: &[String]) -> Result<Self> {
        const P: usize = 64;
        let mut series = BTreeMap::new();
        for n in names {
            if let Some(k) = associator_kind(n) {
                series.insert(n.clone(), Algebra::free(associator_alphabet(k)?, 0, P).one());
            }
        }
        let maps = BUILTIN_MAPS.iter().map(|m| Ok((m.to_string(), named_map(m)?))).collect::<Result<_>>()?;
        let mut algebras = vec![
            Algebra::free(alphabet_for(1)?, 0, P),
            Algebra::free(alphabet_for(2)?, 0, P),
            Algebra::free(alphabet_for(4)?, 0, P),
        ];
        for s in series.values() {
            if !algebras.iter().any(|x| **x.alphabet() == **s.alphabet()) {
                algebras.push(Algebra::free(s.alphabet().clone(), 0, P));
            }
        }
        algebras.push(Algebra::free(t4_alphabet(), 0, P));
        Ok(Self { series, maps, algebras })
    }

    pub(crate) fn is_t4(&self, a: &Algebra) -> bool {
        **a.alphabet() == *t4_alphabet()
    }
}

impl Context for ProbeContext {
    fn series(&self, name: &str) -> Option<&Series> {
        self.series.get(name)
    }

    fn map(&self, name: &str) -> Option<&GeneratorMap> {
        self.maps.get(name)
    }

    fn algebras(&self) -> &[Algebra] {
        &self.algebras
    }
}
