// SPDX-License-Identifier: Apache-2.0

//! `p^n`-ranks of `K_{2i}(O_F)` for `F = Q` and quadratic fields, reported
//! together with the orders of the terms of the exact sequence they come from.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::abgroup::{coinvariants_twisted, eigenspace, ActedGroup, CharacterValue, FinAbGroup};
use crate::arith::{check_odd_prime, padic_val, primitive_root, vp};
use crate::cyclo::{is_exceptional, profile, profile_any, w_order, CycloProfile, Level};
use crate::error::{Error, Result};
use crate::field::{Field, Splitting};
use crate::qforms::{class_group, fundamental_disc, minus_three_twist, s_class_group};
use crate::zeta::{is_regular, zeta_neg};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    SmallN,
    LargeN,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RankKind {
    Exact,
    LowerBound,
}

/// One term of the reported exact sequence; its order is `p^log_order`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Term {
    pub name: String,
    pub log_order: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub quantity: String,
    pub source: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankReport {
    pub field: Field,
    pub p: u64,
    pub i: u64,
    pub n: u32,
    pub regime: Regime,
    pub rank: u32,
    pub rank_kind: RankKind,
    /// Terms in sequence order, starting at the leftmost nonzero term.
    pub term_sizes: Vec<Term>,
    pub inputs_provenance: Vec<Provenance>,
    pub branch: String,
}

impl RankReport {
    /// Alternating sum of term exponents; zero for an exact sequence.
    pub fn euler_characteristic(&self) -> i64 {
        self.term_sizes
            .iter()
            .enumerate()
            .map(|(k, t)| if k % 2 == 0 { t.log_order as i64 } else { -(t.log_order as i64) })
            .sum()
    }

    pub fn is_exact(&self) -> bool {
        self.euler_characteristic() == 0
    }
}

impl fmt::Display for RankReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let bound = match self.rank_kind {
            RankKind::Exact => "",
            RankKind::LowerBound => " (lower bound)",
        };
        writeln!(f, "field {}  p = {}  i = {}  n = {}", self.field, self.p, self.i, self.n)?;
        writeln!(f, "regime: {:?}  branch: {}", self.regime, self.branch)?;
        writeln!(f, "rank r_{{p^n}}(K_{{2i}}) = {}{bound}", self.rank)?;
        for t in &self.term_sizes {
            writeln!(f, "  |{}| = {}^{}", t.name, self.p, t.log_order)?;
        }
        for pr in &self.inputs_provenance {
            writeln!(f, "  [{}] {}", pr.quantity, pr.source)?;
        }
        Ok(())
    }
}

fn prov(quantity: impl Into<String>, source: impl Into<String>) -> Provenance {
    Provenance { quantity: quantity.into(), source: source.into() }
}

/// A class group with group action supplied from outside the library.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassData {
    pub module: ActedGroup,
    /// Cyclotomic character on the named generator; required when `n > a + b`.
    pub character: Option<CharacterValue>,
    pub source: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawClassData {
    description: Option<String>,
    #[serde(default)]
    invariants: Vec<u64>,
    generator: Option<String>,
    action: Option<Vec<Vec<i64>>>,
    group_order: u64,
    character: Option<u64>,
    character_level: Option<u32>,
}

impl ClassData {
    /// Parse the TOML class-data format. `default_level` is used when the
    /// record gives a character value without `character_level`.
    pub fn from_toml_str(text: &str, default_level: u32) -> Result<Self> {
        let raw: RawClassData = toml::from_str(text).map_err(|e| Error::ClassData(e.to_string()))?;
        let group = FinAbGroup::from_invariants(raw.invariants).map_err(|e| Error::ClassData(e.to_string()))?;
        let module = match raw.action {
            Some(rows) => ActedGroup::new(group, rows, raw.group_order).map_err(|e| Error::ClassData(e.to_string()))?,
            None => ActedGroup::trivial_action(group, raw.group_order),
        };
        let character = raw.character.map(|value| CharacterValue {
            value,
            level: raw.character_level.unwrap_or(default_level),
        });
        let generator = raw.generator.unwrap_or_else(|| "g".to_string());
        let source = match raw.description {
            Some(d) => format!("external class data: {d} (generator {generator})"),
            None => format!("external class data (generator {generator})"),
        };
        Ok(ClassData { module, character, source })
    }

    /// Trivial group with the given acting order and character.
    pub fn trivial(order: u64, character: Option<CharacterValue>, source: impl Into<String>) -> Self {
        ClassData {
            module: ActedGroup::trivial_action(FinAbGroup::trivial(), order),
            character,
            source: source.into(),
        }
    }
}

fn check_inputs(p: u64, i: u64, n: u32) -> Result<()> {
    check_odd_prime(p)?;
    if i == 0 || n == 0 {
        return Err(Error::Precondition("i and n must be positive".into()));
    }
    Ok(())
}

fn narrow_note(field: &Field, p: u64, out: &mut Vec<Provenance>) {
    // at p = 3 one of F and its twist by -3 is real
    if matches!(field, Field::Quadratic(q) if q.is_real() || p == 3) {
        out.push(prov(
            "narrow vs wide",
            "form class groups of D > 0 are narrow; they differ from the wide group by a 2-group, so odd p-parts agree",
        ));
    }
}

/// `ε_{-1}` part of the 3-Sylow of the (S-)class group of `Q(√m, √-3)`,
/// computed on the quadratic subfield `Q(√(-3m))`.
pub fn eigenspace_p3(m: i64, with_s: bool) -> Result<FinAbGroup> {
    let twist = minus_three_twist(m)?;
    let d = fundamental_disc(twist)?;
    if with_s {
        s_class_group(d, 3)
    } else {
        Ok(class_group(d)?.p_part(3))
    }
}

fn twist_disc(m: i64) -> Result<i64> {
    fundamental_disc(minus_three_twist(m)?)
}

/// Small-`n` rank (`n ≤ a + b`).
pub fn rank_small_n(field: &Field, p: u64, i: u64, n: u32, external: Option<&ClassData>) -> Result<RankReport> {
    check_inputs(p, i, n)?;
    let prof = profile(field, p)?;
    let b = vp(i, p);
    if n > prof.a + b {
        return Err(Error::WrongRegime { n, ab: prof.a + b });
    }
    let mut provenance = vec![prov("a(F)", "1 for Q and quadratic fields (no μ_{p²} in a degree ≤ 2 field)")];
    narrow_note(field, p, &mut provenance);
    let s_p = prof.s_p() as u32;

    if i % prof.d == 0 {
        let a_s = match field {
            Field::Rational => {
                provenance.push(prov("A^S_F", "class number of Q is 1"));
                FinAbGroup::trivial()
            }
            Field::Quadratic(q) => {
                provenance.push(prov("A^S_F", format!("binary quadratic forms of discriminant {}", q.disc())));
                s_class_group(q.disc(), p)?
            }
        };
        let c = a_s.mod_pn(p, n).log_order(p);
        let rank = a_s.rank_pn(p, n) + s_p - 1;
        let terms = vec![
            Term { name: "μ^{⊗i} ⊗ A^S_F".into(), log_order: c },
            Term { name: "K_{2i}(O_F)/p^n".into(), log_order: c + (s_p - 1) * n },
            Term { name: "⊕_{v∈S_p} μ^{⊗i}".into(), log_order: s_p * n },
            Term { name: "μ^{⊗i}".into(), log_order: n },
        ];
        return Ok(RankReport {
            field: *field,
            p,
            i,
            n,
            regime: Regime::SmallN,
            rank,
            rank_kind: RankKind::Exact,
            term_sizes: terms,
            inputs_provenance: provenance,
            branch: format!("i ≡ 0 mod d = {}, |S_p| = {}", prof.d, s_p),
        });
    }

    let eig = small_n_eigenspace(field, p, i, &prof, external, &mut provenance)?;
    let s_i = prof.local_degrees.iter().filter(|&&dv| i % dv == 0).count() as u32;
    let c = eig.mod_pn(p, n).log_order(p);
    let rank = eig.rank_pn(p, n) + s_i;
    let terms = vec![
        Term { name: "μ^{⊗i} ⊗ ε_{-i}A^S_{F(μ_p)}".into(), log_order: c },
        Term { name: "K_{2i}(O_F)/p^n".into(), log_order: c + s_i * n },
        Term { name: "⊕_{v∈S_p^{(i)}} μ^{⊗i}".into(), log_order: s_i * n },
    ];
    Ok(RankReport {
        field: *field,
        p,
        i,
        n,
        regime: Regime::SmallN,
        rank,
        rank_kind: RankKind::Exact,
        term_sizes: terms,
        inputs_provenance: provenance,
        branch: format!("i ≢ 0 mod d = {}, |S_p^(i)| = {}", prof.d, s_i),
    })
}

fn small_n_eigenspace(
    field: &Field,
    p: u64,
    i: u64,
    prof: &CycloProfile,
    external: Option<&ClassData>,
    provenance: &mut Vec<Provenance>,
) -> Result<FinAbGroup> {
    let j = -(i as i64);
    if let Some(data) = external {
        if data.module.acting_order() != prof.d {
            return Err(Error::ClassData(format!(
                "group_order must equal |F(μ_p):F| = {} for n ≤ a + b",
                prof.d
            )));
        }
        let precision = data.module.group().log_order(p).max(1);
        provenance.push(prov("ε_{-i}A^S_{F(μ_p)}", data.source.clone()));
        return eigenspace(&data.module, j, p, precision);
    }
    match field {
        Field::Rational if is_regular(p) => {
            provenance.push(prov(
                "ε_{-i}A^S_{Q(μ_p)}",
                format!("trivial: {p} is regular (no Bernoulli numerator B_k, k ≤ p-3, divisible by p)"),
            ));
            Ok(FinAbGroup::trivial())
        }
        Field::Quadratic(q) if p == 3 => {
            let d = twist_disc(q.m())?;
            provenance.push(prov(
                "ε_{-i}A^S_{F(μ_3)}",
                format!("3-part of the S-class group of the quadratic subfield of discriminant {d} of F(√-3)"),
            ));
            eigenspace_p3(q.m(), true)
        }
        _ => Err(Error::ExternalDataRequired(format!(
            "ε_{{-{i}}}A^S of {field}(μ_{p}) is not computed here; supply --class-data"
        ))),
    }
}

/// Class data for `F = Q`, `n > a + b`, when `p` is regular: `A^S_E` is trivial
/// for every `E = Q(μ_{p^k})`, and `G = (Z/p^{n-b})^×` is generated by the
/// smallest primitive root.
pub fn rational_large_n_data(p: u64, i: u64, n: u32) -> Result<ClassData> {
    let b = vp(i, p);
    if n <= 1 + b {
        return Err(Error::WrongRegime { n, ab: 1 + b });
    }
    if !is_regular(p) {
        return Err(Error::ExternalDataRequired(format!(
            "A^S of Q(μ_{{{p}^{}}}) for irregular p = {p}; supply --class-data",
            n - b
        )));
    }
    let level = n - b;
    let g = primitive_root(p, level)?;
    Ok(ClassData::trivial(
        g.group_order(),
        Some(CharacterValue { value: g.value, level }),
        format!("trivial: {p} is regular, so no Q(μ_{{{p}^k}}) has class number divisible by {p}"),
    ))
}

/// Large-`n` report (`n > a + b`) from `A^S_E` with its `G`-action.
pub fn rank_large_n(field: &Field, p: u64, i: u64, n: u32, external: &ClassData) -> Result<RankReport> {
    check_inputs(p, i, n)?;
    let prof = profile(field, p)?;
    let b = vp(i, p);
    if n <= prof.a + b {
        return Err(Error::WrongRegime { n, ab: prof.a + b });
    }
    let expected_order = prof.d * crate::arith::pow_u64(p, n - b - prof.a);
    if external.module.acting_order() != expected_order {
        return Err(Error::ClassData(format!(
            "group_order must equal |Gal(F(μ_{{p^{}}})/F)| = {expected_order}",
            n - b
        )));
    }
    let chi = external
        .character
        .ok_or_else(|| Error::ClassData("a character value is required for n > a + b".into()))?;

    let mut provenance = vec![
        prov("a(F)", "1 for Q and quadratic fields (no μ_{p²} in a degree ≤ 2 field)"),
        prov("A^S_E", external.source.clone()),
    ];
    narrow_note(field, p, &mut provenance);

    let coinv = coinvariants_twisted(&external.module, p, n, i, chi)?;
    let c = coinv.log_order(p);
    let locals: Vec<u32> = prof
        .local_degrees
        .iter()
        .map(|&dv| vp(w_order(dv, 1, p, i, Level::Finite(n)), p))
        .collect();
    let global = vp(w_order(prof.d, prof.a, p, i, Level::Finite(n)), p);
    let l_sum: u32 = locals.iter().sum();

    // Y = kernel of the (surjective) sum of local terms onto the global term
    let y: Option<Vec<u32>> = if global == 0 {
        Some(locals.clone())
    } else if locals.len() == 1 {
        Some(vec![locals[0] - global])
    } else if locals.iter().all(|&l| l == global) {
        Some(vec![global; locals.len() - 1])
    } else {
        None
    };
    let c_rank = coinv.rank_pn(p, n);
    let c_free = coinv.invariants().iter().all(|&d| vp(d, p) == n);
    let (rank, rank_kind) = match &y {
        Some(ys) => {
            let y_rank = ys.iter().filter(|&&e| e == n).count() as u32;
            let y_free = ys.iter().all(|&e| e == n || e == 0);
            if c_free || y_free {
                (c_rank + y_rank, RankKind::Exact)
            } else {
                (c_rank, RankKind::LowerBound)
            }
        }
        None => (c_rank, RankKind::LowerBound),
    };
    let terms = vec![
        Term { name: "(μ^{⊗i} ⊗ A^S_E)_G".into(), log_order: c },
        Term { name: "K_{2i}(O_F)/p^n".into(), log_order: c + l_sum - global },
        Term { name: "⊕_{v∈S_p} μ^{⊗i}(F_v)".into(), log_order: l_sum },
        Term { name: "μ^{⊗i}(F)".into(), log_order: global },
    ];
    Ok(RankReport {
        field: *field,
        p,
        i,
        n,
        regime: Regime::LargeN,
        rank,
        rank_kind,
        term_sizes: terms,
        inputs_provenance: provenance,
        branch: format!("n > a + b = {}, |S_p| = {}", prof.a + b, prof.s_p()),
    })
}

fn quadratic_branch(field: &Field, p: u64, i: u64, split: bool) -> String {
    if i % (p - 1) == 0 {
        if split {
            "p split, i ≡ 0 mod p−1".into()
        } else {
            "p non-split, i ≡ 0 mod p−1".into()
        }
    } else if is_exceptional(field, p) && i % ((p - 1) / 2) == 0 {
        "exceptional: p ramified in F and split in Q(√m₁), i ≡ 0 mod (p−1)/2".into()
    } else {
        "i ≢ 0 mod p−1".into()
    }
}

/// Report for `Q(√m)`, dispatching on the regime.
pub fn quad_report(m: i64, p: u64, i: u64, n: u32, external: Option<&ClassData>) -> Result<RankReport> {
    check_inputs(p, i, n)?;
    let field = Field::quadratic(m)?;
    let prof = profile(&field, p)?;
    let split = match field {
        Field::Quadratic(q) => q.splitting(p) == Splitting::Split,
        Field::Rational => unreachable!(),
    };
    let mut report = if n <= prof.a + vp(i, p) {
        rank_small_n(&field, p, i, n, external)?
    } else {
        let data = external.ok_or_else(|| {
            Error::ExternalDataRequired(format!(
                "A^S of {field}(μ_{{{p}^{}}}) with its Galois action; supply --class-data",
                n - vp(i, p)
            ))
        })?;
        rank_large_n(&field, p, i, n, data)?
    };
    report.branch = quadratic_branch(&field, p, i, split);
    Ok(report)
}

/// `v_p(|K_{2i}(O_F)|)` from `ζ_F(-i)` and `w_{i+1}(F)`, for `i` odd.
pub fn k_order_ppart(field: &Field, p: u64, i: u64) -> Result<i64> {
    check_odd_prime(p)?;
    if !field.is_totally_real() {
        return Err(Error::NotTotallyReal);
    }
    if i == 0 || i % 2 == 0 {
        return Err(Error::ZetaVanishes);
    }
    let prof = profile_any(field, p)?;
    let zeta = zeta_neg(field, i as usize + 1)?;
    let w = w_order(prof.d, prof.a, p, i + 1, Level::Infinite);
    Ok(padic_val(&zeta, p)? + vp(w, p) as i64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quad(m: i64) -> Field {
        Field::quadratic(m).unwrap()
    }

    #[test]
    fn small_n_examples() {
        let r = rank_small_n(&Field::Rational, 3, 1, 1, None).unwrap();
        assert_eq!(r.rank, 0);
        assert!(r.is_exact());
        assert_eq!(rank_small_n(&quad(5), 3, 2, 1, None).unwrap().rank, 0);
        let r = rank_small_n(&quad(6), 3, 1, 1, None).unwrap();
        assert_eq!(r.rank, 1);
        assert!(r.is_exact());
        assert!(matches!(rank_small_n(&quad(6), 3, 1, 2, None), Err(Error::WrongRegime { .. })));
        assert!(matches!(rank_small_n(&quad(6), 5, 1, 1, None), Err(Error::ExternalDataRequired(_))));
        // 37 is irregular
        assert!(matches!(rank_small_n(&Field::Rational, 37, 1, 1, None), Err(Error::ExternalDataRequired(_))));
        assert_eq!(rank_small_n(&Field::Rational, 5, 4, 1, None).unwrap().rank, 0);
    }

    #[test]
    fn eigenspace_p3_examples() {
        assert!(eigenspace_p3(5, false).unwrap().is_trivial());
        assert_eq!(eigenspace_p3(79, false).unwrap(), class_group(-948).unwrap().p_part(3));
        assert_eq!(eigenspace_p3(-2, false).unwrap(), class_group(24).unwrap().p_part(3));
        assert!(eigenspace_p3(-3, true).is_err());
    }

    #[test]
    fn large_n_examples() {
        let data = rational_large_n_data(3, 1, 2).unwrap();
        let r = rank_large_n(&Field::Rational, 3, 1, 2, &data).unwrap();
        assert_eq!((r.rank, r.rank_kind), (0, RankKind::Exact));
        assert!(r.term_sizes.iter().all(|t| t.log_order == 0));

        let data = rational_large_n_data(3, 2, 3).unwrap();
        let r = rank_large_n(&Field::Rational, 3, 2, 3, &data).unwrap();
        assert_eq!((r.rank, r.rank_kind), (0, RankKind::Exact));
        let orders: Vec<u32> = r.term_sizes.iter().map(|t| t.log_order).collect();
        assert_eq!(orders, vec![0, 0, 1, 1]);
        assert!(r.is_exact());

        assert!(matches!(rank_large_n(&Field::Rational, 3, 1, 1, &data), Err(Error::WrongRegime { .. })));
    }

    #[test]
    fn large_n_with_nontrivial_coinvariants() {
        // A = Z/9, G = (Z/9)^× acting trivially, χ(g) = 2, i = 6, n = 3: the
        // twisted coinvariants are A/(2^6 - 1)A = Z/9.
        let g = primitive_root(3, 2).unwrap();
        let module = ActedGroup::trivial_action(FinAbGroup::cyclic(9), 6);
        let data = ClassData { module, character: Some(CharacterValue { value: g.value, level: 2 }), source: "test".into() };
        let r = rank_large_n(&Field::Rational, 3, 6, 3, &data).unwrap();
        let orders: Vec<u32> = r.term_sizes.iter().map(|t| t.log_order).collect();
        assert_eq!(orders, vec![2, 2, 2, 2]);
        assert_eq!((r.rank, r.rank_kind), (0, RankKind::Exact));
        // same module at n = 2 would need n > 2
        assert!(rank_large_n(&Field::Rational, 3, 6, 2, &data).is_err());
    }

    #[test]
    fn quad_report_examples() {
        let r = quad_report(6, 3, 1, 1, None).unwrap();
        assert_eq!(r.rank, 1);
        assert!(r.branch.starts_with("exceptional"));
        let r = quad_report(5, 3, 2, 1, None).unwrap();
        assert_eq!(r.rank, 0);
        assert_eq!(r.branch, "p non-split, i ≡ 0 mod p−1");
        let r = quad_report(2, 3, 1, 1, None).unwrap();
        assert_eq!(r.rank, s_class_group(-24, 3).unwrap().rank_pn(3, 1));
        assert!(matches!(quad_report(6, 3, 1, 9, None), Err(Error::ExternalDataRequired(_))));
        assert!(matches!(quad_report(-3, 3, 1, 1, None), Err(Error::ExcludedField { .. })));
    }

    #[test]
    fn k_order_examples() {
        assert_eq!(k_order_ppart(&Field::Rational, 3, 1).unwrap(), 0);
        assert_eq!(k_order_ppart(&Field::Rational, 691, 11).unwrap(), 1);
        assert_eq!(k_order_ppart(&quad(5), 3, 1).unwrap(), 0);
        assert_eq!(k_order_ppart(&Field::Rational, 3, 2), Err(Error::ZetaVanishes));
        assert_eq!(k_order_ppart(&quad(-5), 3, 1), Err(Error::NotTotallyReal));
    }

    #[test]
    fn class_data_parsing() {
        let text = r#"
            description = "toy module"
            invariants = [3, 9]
            generator = "tau"
            action = [[2, 0], [0, 8]]
            group_order = 2
        "#;
        let data = ClassData::from_toml_str(text, 1).unwrap();
        assert_eq!(data.module.group().invariants(), &[3, 9]);
        assert!(data.character.is_none());
        // τ acts by -1 on everything: the whole module is the odd eigenspace
        let r = rank_small_n(&quad(7), 5, 1, 1, None);
        assert!(r.is_err());
        let e = eigenspace(&data.module, 1, 3, 2).unwrap();
        assert_eq!(e.invariants(), &[3, 9]);
        assert!(ClassData::from_toml_str("invariants = [3, 2]\ngroup_order = 2", 1).is_err());
        assert!(ClassData::from_toml_str("group_order = 2\nbogus = 1", 1).is_err());
        let triv = ClassData::from_toml_str("group_order = 6\ncharacter = 2\n", 2).unwrap();
        assert_eq!(triv.character, Some(CharacterValue { value: 2, level: 2 }));
    }

    #[test]
    fn external_small_n_eigenspace() {
        // F = Q(√7), p = 5: supply a Z/5 on which τ (order 4) acts by ζ^{-1}
        use crate::abgroup::delta_root_of_unity;
        let zeta = delta_root_of_unity(5, 1, 4).unwrap();
        let inv = crate::arith::mod_inverse(zeta, 5).unwrap();
        let text = format!("invariants = [5]\naction = [[{inv}]]\ngroup_order = 4\n");
        let data = ClassData::from_toml_str(&text, 1).unwrap();
        let r = rank_small_n(&quad(7), 5, 1, 1, Some(&data)).unwrap();
        assert_eq!(r.rank, 1);
        let r = rank_small_n(&quad(7), 5, 3, 1, Some(&data)).unwrap();
        assert_eq!(r.rank, 0);
    }
}
