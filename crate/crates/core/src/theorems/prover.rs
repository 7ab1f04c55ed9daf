use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use super::catalog::{suffix, AceEncoding};
use super::TheoremError;
use crate::automata::text::{dfa_to_text, dfao_to_text};
use crate::automata::{acceptors_to_dfao, Dfa, Dfao, Symbol};
use crate::logic::{parse_formula, CompileCache, Formula, PredicateStore};
use crate::rational::Rational;
use crate::sequences::SequenceId;

/// The wraparound repetition predicate `crep(i,m,n,p,s)`: the length-`m`
/// factor at position `i` of the circular word `T[s..s+n-1]`, read twice,
/// has period `p`.
pub const CREP: &str = "(Aj ((j>=i)&(j+p<s+n)&(j+p<i+m)) => T[j]=T[j+p]) & \
     (Aj ((j>=i)&(j<s+n)&(j+p>=s+n)&(j+p<i+m)) => T[j]=T[(j+p)-n]) & \
     (Aj ((j>=i)&(j>=s+n)&(j+p<i+m)) => T[j-n]=T[(j+p)-n])";

/// Per-exponent predicates. Each is named by its stem followed by the
/// exponent suffix, e.g. `prefeq73`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pred {
    /// Some repetition of exponent at least `a/b` in the length-`n` prefix.
    PrefGe,
    PrefGt,
    PrefEq,
    /// As the prefix versions, for the factor `T[s..s+n-1]`.
    FacGe,
    FacGt,
    FacEq,
    /// Some length-`n` factor has exponent exactly `a/b`.
    Fac,
    /// `a/b` is the least exponent over length-`n` factors.
    FacSmall,
    /// `a/b` is the greatest exponent over length-`n` factors.
    FacLarge,
}

impl Pred {
    pub fn stem(self) -> &'static str {
        match self {
            Pred::PrefGe => "prefge",
            Pred::PrefGt => "prefgt",
            Pred::PrefEq => "prefeq",
            Pred::FacGe => "facge",
            Pred::FacGt => "facgt",
            Pred::FacEq => "faceq",
            Pred::Fac => "fac",
            Pred::FacSmall => "facsmall",
            Pred::FacLarge => "faclarge",
        }
    }

    pub fn name(self, r: Rational) -> String {
        format!("{}{}", self.stem(), suffix(r))
    }

    fn deps(self) -> &'static [Pred] {
        match self {
            Pred::PrefGe | Pred::PrefGt | Pred::FacGe | Pred::FacGt => &[],
            Pred::PrefEq => &[Pred::PrefGe, Pred::PrefGt],
            Pred::FacEq => &[Pred::FacGe, Pred::FacGt],
            Pred::Fac => &[Pred::FacEq],
            Pred::FacSmall => &[Pred::Fac, Pred::FacGe],
            Pred::FacLarge => &[Pred::Fac, Pred::FacGt],
        }
    }

    /// Script source; `b*m >= a*p` says `m/p >= a/b` without division.
    pub fn source(self, r: Rational) -> String {
        let (a, b, x) = (r.numer(), r.denom(), suffix(r));
        let pref = |rel: &str| format!("E i,m,p (p>=1) & (m<=n) & (i<n) & ({b}*m{rel}{a}*p) & $crep(i,m,n,p,0)");
        let fac =
            |rel: &str| format!("E i,m,p (p>=1) & (m<=n) & (i>=s) & (i<s+n) & ({b}*m{rel}{a}*p) & $crep(i,m,n,p,s)");
        match self {
            Pred::PrefGe => pref(">="),
            Pred::PrefGt => pref(">"),
            Pred::PrefEq => format!("$prefge{x}(n) & ~$prefgt{x}(n)"),
            Pred::FacGe => fac(">="),
            Pred::FacGt => fac(">"),
            Pred::FacEq => format!("$facge{x}(n,s) & ~$facgt{x}(n,s)"),
            Pred::Fac => format!("E s $faceq{x}(n,s)"),
            Pred::FacSmall => format!("$fac{x}(n) & (As $facge{x}(n,s))"),
            Pred::FacLarge => format!("$fac{x}(n) & (As ~$facgt{x}(n,s))"),
        }
    }
}

/// Builds and stores the named predicates of one sequence, compiling
/// independent ones in parallel.
pub struct Prover {
    seq: SequenceId,
    store: PredicateStore,
    artifacts: Option<PathBuf>,
}

impl Prover {
    pub fn new(seq: SequenceId) -> Self {
        Prover {
            seq,
            store: PredicateStore::new(),
            artifacts: None,
        }
    }

    /// Compiled predicates go to `cache`; finished DFAOs and named
    /// predicates are written to [`Prover::artifact_dir`].
    pub fn with_cache(mut self, cache: CompileCache) -> Self {
        self.artifacts = Some(Self::artifact_dir(cache.dir(), self.seq));
        self.store = self.store.with_cache(cache);
        self
    }

    pub fn with_limit(mut self, limit: Option<usize>) -> Self {
        self.store = self.store.with_limit(limit);
        self
    }

    /// `<cache>/artifacts/<sequence>`; artifact `name` is `name.txt` there.
    pub fn artifact_dir(cache_dir: &Path, seq: SequenceId) -> PathBuf {
        cache_dir.join("artifacts").join(seq.name())
    }

    pub fn sequence(&self) -> SequenceId {
        self.seq
    }

    pub fn store(&self) -> &PredicateStore {
        &self.store
    }

    pub fn parse(&self, src: &str) -> Result<Formula, TheoremError> {
        Ok(parse_formula(src, self.seq)?)
    }

    pub fn crep(&mut self) -> Result<Dfa, TheoremError> {
        if !self.store.contains("crep") {
            let f = self.parse(CREP)?;
            let d = self.store.compile_cached(&f)?;
            self.store_named("crep", d)?;
        }
        Ok(self.store.get("crep").expect("defined").clone())
    }

    fn store_named(&mut self, name: &str, d: Dfa) -> Result<(), TheoremError> {
        self.save_artifact(name, &dfa_to_text(&d))?;
        self.store.insert(name, d)?;
        Ok(())
    }

    /// Defines every listed predicate that is still missing, after its
    /// dependencies.
    pub fn ensure(&mut self, items: &[(Pred, Rational)]) -> Result<(), TheoremError> {
        let mut missing: Vec<(Pred, Rational)> = Vec::new();
        for &(k, r) in items {
            if !self.store.contains(&k.name(r)) && !missing.contains(&(k, r)) {
                missing.push((k, r));
            }
        }
        if missing.is_empty() {
            return Ok(());
        }
        let deps: Vec<(Pred, Rational)> = missing
            .iter()
            .flat_map(|&(k, r)| k.deps().iter().map(move |&d| (d, r)))
            .collect();
        self.ensure(&deps)?;
        // a dependency of one item may be another item
        missing.retain(|&(k, r)| !self.store.contains(&k.name(r)));
        self.crep()?;
        let formulas: Vec<Formula> = missing
            .iter()
            .map(|&(k, r)| self.parse(&k.source(r)))
            .collect::<Result<_, _>>()?;
        let store = &self.store;
        let built: Vec<Dfa> = formulas
            .par_iter()
            .map(|f| store.compile_cached(f))
            .collect::<Result<_, _>>()?;
        for (&(k, r), d) in missing.iter().zip(built) {
            self.store_named(&k.name(r), d)?;
        }
        Ok(())
    }

    pub fn predicate(&mut self, kind: Pred, r: Rational) -> Result<Dfa, TheoremError> {
        self.ensure(&[(kind, r)])?;
        Ok(self.store.get(&kind.name(r)).expect("defined").clone())
    }

    /// `(prefge, prefgt, prefeq)` over `n`.
    pub fn pref(&mut self, r: Rational) -> Result<(Dfa, Dfa, Dfa), TheoremError> {
        Ok((
            self.predicate(Pred::PrefGe, r)?,
            self.predicate(Pred::PrefGt, r)?,
            self.predicate(Pred::PrefEq, r)?,
        ))
    }

    /// `(facge, facgt, faceq)` over `(n, s)`.
    pub fn fac(&mut self, r: Rational) -> Result<(Dfa, Dfa, Dfa), TheoremError> {
        Ok((
            self.predicate(Pred::FacGe, r)?,
            self.predicate(Pred::FacGt, r)?,
            self.predicate(Pred::FacEq, r)?,
        ))
    }

    /// `(fac, facsmall)` over `n`.
    pub fn fac_small(&mut self, r: Rational) -> Result<(Dfa, Dfa), TheoremError> {
        Ok((self.predicate(Pred::Fac, r)?, self.predicate(Pred::FacSmall, r)?))
    }

    pub fn fac_large(&mut self, r: Rational) -> Result<Dfa, TheoremError> {
        self.predicate(Pred::FacLarge, r)
    }

    pub fn eval(&mut self, src: &str) -> Result<bool, TheoremError> {
        let f = self.parse(src)?;
        Ok(self.store.eval_closed(&f)?)
    }

    /// `An (n>=1) => (<disjunction of stem over set>)`, with an inner `As`
    /// for the two-variable predicates.
    pub fn coverage_formula(kind: Pred, set: &[Rational]) -> String {
        let two = matches!(kind, Pred::FacGe | Pred::FacGt | Pred::FacEq);
        let args = if two { "(n,s)" } else { "(n)" };
        let alts: Vec<String> = set.iter().map(|&r| format!("${}{args}", kind.name(r))).collect();
        let body = alts.join(" | ");
        if two {
            format!("An (n>=1) => (As ({body}))")
        } else {
            format!("An (n>=1) => ({body})")
        }
    }

    fn domain(&mut self, two: bool) -> Result<Dfa, TheoremError> {
        let f = self.parse(if two { "n>=1 & s>=0" } else { "n>=1" })?;
        Ok(self.store.compile_cached(&f)?)
    }

    /// DFAO whose output at `n` (or `(n, s)`) is the exponent whose
    /// `kind` predicate holds there; `None` at `n = 0`.
    pub fn exponent_dfao(&mut self, kind: Pred, set: &[Rational]) -> Result<Dfao<Option<Rational>>, TheoremError> {
        let items: Vec<(Pred, Rational)> = set.iter().map(|&r| (kind, r)).collect();
        self.ensure(&items)?;
        let pairs: Vec<(Dfa, Option<Rational>)> = set
            .iter()
            .map(|&r| (self.store.get(&kind.name(r)).expect("defined").clone(), Some(r)))
            .collect();
        let domain = self.domain(matches!(kind, Pred::FacEq))?;
        Ok(acceptors_to_dfao(&pairs, Some(&domain), None)?)
    }

    /// Prefix exponent of `T[0..n-1]`.
    pub fn prefix_dfao(&mut self, set: &[Rational]) -> Result<Dfao<Option<Rational>>, TheoremError> {
        self.exponent_dfao(Pred::PrefEq, set)
    }

    /// Exponent of `T[s..s+n-1]`, over tracks `(n, s)`.
    pub fn factor_dfao(&mut self, set: &[Rational]) -> Result<Dfao<Option<Rational>>, TheoremError> {
        self.exponent_dfao(Pred::FacEq, set)
    }

    pub fn lcce_dfao(&mut self, set: &[Rational]) -> Result<Dfao<Option<Rational>>, TheoremError> {
        self.exponent_dfao(Pred::FacSmall, set)
    }

    pub fn gcce_dfao(&mut self, set: &[Rational]) -> Result<Dfao<Option<Rational>>, TheoremError> {
        self.exponent_dfao(Pred::FacLarge, set)
    }

    /// The set of exponents of length-`n` factors, encoded over `set`.
    pub fn ace_dfao(&mut self, set: &[Rational]) -> Result<Dfao<Option<AceEncoding>>, TheoremError> {
        let items: Vec<(Pred, Rational)> = set.iter().map(|&r| (Pred::Fac, r)).collect();
        self.ensure(&items)?;
        let domain = self.domain(false)?;
        let mut acc: Dfao<Option<AceEncoding>> = Dfao::from_dfa(&domain).map_outputs(|&b| b.then_some(AceEncoding(0)));
        for &r in set {
            let bit = AceEncoding::bit(set, r).expect("member");
            let fac = Dfao::from_dfa(self.store.get(&Pred::Fac.name(r)).expect("defined"));
            acc = acc.cross_with(&fac, |o, &b| o.map(|e| if b { AceEncoding(e.0 | bit) } else { e }))?;
        }
        Ok(acc.minimize())
    }

    /// Writes `text` as the artifact `name`; returns its path.
    pub fn save_artifact(&self, name: &str, text: &str) -> Result<Option<PathBuf>, TheoremError> {
        let Some(dir) = &self.artifacts else {
            return Ok(None);
        };
        fs::create_dir_all(dir).map_err(|e| TheoremError::Io(format!("{}: {e}", dir.display())))?;
        let path = dir.join(format!("{name}.txt"));
        let tmp = path.with_extension("tmp");
        fs::write(&tmp, text)
            .and_then(|_| fs::rename(&tmp, &path))
            .map_err(|e| TheoremError::Io(format!("{}: {e}", path.display())))?;
        Ok(Some(path))
    }

    pub fn save_dfao<O: Symbol>(&self, name: &str, m: &Dfao<O>) -> Result<Option<PathBuf>, TheoremError> {
        self.save_artifact(name, &dfao_to_text(m))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sources_parse() {
        let p = Prover::new(SequenceId::ThueMorse);
        let r = Rational::of(7, 3);
        for k in [
            Pred::PrefGe,
            Pred::PrefGt,
            Pred::PrefEq,
            Pred::FacGe,
            Pred::FacGt,
            Pred::FacEq,
            Pred::Fac,
            Pred::FacSmall,
            Pred::FacLarge,
        ] {
            let f = p.parse(&k.source(r)).unwrap();
            let free: Vec<String> = f.free_vars().into_iter().collect();
            let expect: &[&str] = if matches!(k, Pred::FacGe | Pred::FacGt | Pred::FacEq) {
                &["n", "s"]
            } else {
                &["n"]
            };
            assert_eq!(free, expect, "{k:?}");
        }
        assert_eq!(Pred::FacSmall.name(Rational::of(17, 7)), "facsmall177");
        assert!(p
            .parse(CREP)
            .unwrap()
            .free_vars()
            .into_iter()
            .eq(["i", "m", "n", "p", "s"]));
    }
}
