//! (2,3)-SAT instances: DIMACS input, normal form, brute force and random
//! generation.

use std::collections::BTreeMap;
use std::fmt;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::ReductionError;

/// A nonzero signed variable index, 1-based.
pub type Literal = i32;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SatInstance {
    pub variable_count: usize,
    pub clauses: Vec<Vec<Literal>>,
}

/// Occurrence statistics of a normalized instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct InstanceStats {
    /// `|X|`
    pub variables: usize,
    /// `|X_TF|`, variables occurring twice
    pub tf_variables: usize,
    /// `|Y|`
    pub clauses: usize,
    /// `|Y_2|`
    pub two_clauses: usize,
    /// `|Y_3|`
    pub three_clauses: usize,
    /// `‖Y‖`, literal occurrences
    pub occurrences: usize,
}

impl SatInstance {
    pub fn new(variable_count: usize, clauses: Vec<Vec<Literal>>) -> Self {
        SatInstance {
            variable_count,
            clauses,
        }
    }

    /// `(positive, negative)` occurrence counts per variable, 0-based.
    pub fn occurrences(&self) -> Vec<(usize, usize)> {
        let mut occ = vec![(0, 0); self.variable_count];
        for &lit in self.clauses.iter().flatten() {
            let v = lit.unsigned_abs() as usize - 1;
            if lit > 0 {
                occ[v].0 += 1;
            } else {
                occ[v].1 += 1;
            }
        }
        occ
    }

    pub fn stats(&self) -> InstanceStats {
        let occ = self.occurrences();
        InstanceStats {
            variables: self.variable_count,
            tf_variables: occ.iter().filter(|&&(p, n)| p + n == 2).count(),
            clauses: self.clauses.len(),
            two_clauses: self.clauses.iter().filter(|c| c.len() == 2).count(),
            three_clauses: self.clauses.iter().filter(|c| c.len() == 3).count(),
            occurrences: self.clauses.iter().map(Vec::len).sum(),
        }
    }

    /// Whether the instance already satisfies every normal-form invariant:
    /// 2- and 3-clauses over distinct variables, each variable occurring
    /// positive once and negative once, or positive twice and negative once.
    pub fn is_normalized(&self) -> bool {
        let clauses_ok = self.clauses.iter().all(|c| {
            let mut vars: Vec<u32> = c.iter().map(|l| l.unsigned_abs()).collect();
            vars.sort_unstable();
            vars.dedup();
            (c.len() == 2 || c.len() == 3)
                && vars.len() == c.len()
                && c.iter()
                    .all(|&l| l != 0 && l.unsigned_abs() as usize <= self.variable_count)
        });
        clauses_ok
            && self
                .occurrences()
                .iter()
                .all(|&o| o == (1, 1) || o == (2, 1))
    }

    pub fn is_satisfied_by(&self, values: &[bool]) -> bool {
        self.clauses
            .iter()
            .all(|c| c.iter().any(|&l| literal_true(l, values)))
    }

    pub fn to_dimacs(&self) -> String {
        let mut out = format!("p cnf {} {}\n", self.variable_count, self.clauses.len());
        for c in &self.clauses {
            for l in c {
                out.push_str(&format!("{l} "));
            }
            out.push_str("0\n");
        }
        out
    }
}

impl fmt::Display for SatInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_dimacs())
    }
}

pub fn literal_true(lit: Literal, values: &[bool]) -> bool {
    values[lit.unsigned_abs() as usize - 1] == (lit > 0)
}

/// Parse the DIMACS subset: `c` comment lines, one `p cnf V C` header,
/// zero-terminated clauses that may span lines, optional `%` end marker.
pub fn parse_cnf(text: &str) -> Result<SatInstance, ReductionError> {
    let err = |line: usize, message: String| ReductionError::Cnf { line, message };
    let mut header: Option<(usize, usize)> = None;
    let mut clauses = Vec::new();
    let mut current: Vec<Literal> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        if line.starts_with('%') {
            break;
        }
        if line.starts_with('p') {
            let parts: Vec<&str> = line.split_whitespace().collect();
            if header.is_some() {
                return Err(err(line_no, "duplicate header".into()));
            }
            match parts.as_slice() {
                ["p", "cnf", v, c] => {
                    let v = v
                        .parse()
                        .map_err(|_| err(line_no, format!("bad variable count `{v}`")))?;
                    let c = c
                        .parse()
                        .map_err(|_| err(line_no, format!("bad clause count `{c}`")))?;
                    header = Some((v, c));
                }
                _ => {
                    return Err(err(
                        line_no,
                        "expected `p cnf <variables> <clauses>`".into(),
                    ))
                }
            }
            continue;
        }
        let Some((vars, _)) = header else {
            return Err(err(line_no, "clause before `p cnf` header".into()));
        };
        for tok in line.split_whitespace() {
            let lit: i64 = tok
                .parse()
                .map_err(|_| err(line_no, format!("`{tok}` is not an integer")))?;
            if lit == 0 {
                clauses.push(std::mem::take(&mut current));
            } else if lit.unsigned_abs() as usize > vars {
                return Err(err(
                    line_no,
                    format!("literal {lit} exceeds {vars} variables"),
                ));
            } else {
                current.push(lit as Literal);
            }
        }
    }
    let Some((vars, count)) = header else {
        return Err(err(0, "missing `p cnf` header".into()));
    };
    if !current.is_empty() {
        return Err(err(0, "last clause is not terminated by 0".into()));
    }
    if clauses.len() != count {
        return Err(err(
            0,
            format!("header announces {count} clauses, found {}", clauses.len()),
        ));
    }
    Ok(SatInstance::new(vars, clauses))
}

/// Where a normalized variable comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VarOrigin {
    /// 1-based variable of the input instance.
    pub original: u32,
    /// Whether the polarity was flipped.
    pub flipped: bool,
}

/// A normalized instance with the bookkeeping needed to map assignments
/// back to the input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Normalized {
    pub instance: SatInstance,
    pub origin: Vec<VarOrigin>,
    /// Values fixed by pure-literal elimination, keyed by input variable.
    pub forced: BTreeMap<u32, bool>,
    /// Input clauses kept, in order (indices into the input clause list).
    pub kept_clauses: Vec<usize>,
    pub original_variable_count: usize,
}

impl Normalized {
    /// Input assignment from one of the normalized instance. Variables that
    /// never occur are set false.
    pub fn lift(&self, values: &[bool]) -> Vec<bool> {
        let mut out = vec![false; self.original_variable_count];
        for (&v, &val) in &self.forced {
            out[v as usize - 1] = val;
        }
        for (o, &val) in self.origin.iter().zip(values) {
            out[o.original as usize - 1] = val != o.flipped;
        }
        out
    }

    /// Normalized assignment from one of the input instance.
    pub fn lower(&self, values: &[bool]) -> Vec<bool> {
        self.origin
            .iter()
            .map(|o| values[o.original as usize - 1] != o.flipped)
            .collect()
    }
}

/// Bring an instance into (2,3)-SAT normal form.
///
/// Pure literals are eliminated repeatedly together with the clauses they
/// satisfy, variables with two negative and one positive occurrence are
/// flipped, and the remaining variables are renumbered in input order.
/// Satisfiability is preserved.
pub fn normalize(inst: &SatInstance) -> Result<Normalized, ReductionError> {
    for (i, c) in inst.clauses.iter().enumerate() {
        if c.len() != 2 && c.len() != 3 {
            return Err(ReductionError::OutsideFragment(format!(
                "clause {} has {} literals; only 2- and 3-clauses are allowed",
                i + 1,
                c.len()
            )));
        }
        for (j, &l) in c.iter().enumerate() {
            if l == 0 || l.unsigned_abs() as usize > inst.variable_count {
                return Err(ReductionError::OutsideFragment(format!(
                    "clause {} has invalid literal {l}",
                    i + 1
                )));
            }
            for &m in &c[..j] {
                if m == l {
                    return Err(ReductionError::OutsideFragment(format!(
                        "clause {} repeats literal {l}",
                        i + 1
                    )));
                }
                if m == -l {
                    return Err(ReductionError::OutsideFragment(format!(
                        "clause {} contains both {l} and {m}",
                        i + 1
                    )));
                }
            }
        }
    }
    let mut alive: Vec<bool> = vec![true; inst.clauses.len()];
    let mut forced = BTreeMap::new();
    loop {
        let mut occ = vec![(0usize, 0usize); inst.variable_count];
        for (c, _) in inst.clauses.iter().zip(&alive).filter(|(_, &a)| a) {
            for &l in c {
                let v = l.unsigned_abs() as usize - 1;
                if l > 0 {
                    occ[v].0 += 1;
                } else {
                    occ[v].1 += 1;
                }
            }
        }
        let pure = occ.iter().position(|&(p, n)| (p > 0) != (n > 0));
        let Some(v) = pure else {
            break;
        };
        let value = occ[v].0 > 0;
        forced.insert(v as u32 + 1, value);
        for (c, a) in inst.clauses.iter().zip(alive.iter_mut()) {
            if c.iter().any(|&l| l.unsigned_abs() as usize == v + 1) {
                *a = false;
            }
        }
    }
    let kept: Vec<usize> = (0..inst.clauses.len()).filter(|&i| alive[i]).collect();
    let mut occ = vec![(0usize, 0usize); inst.variable_count];
    for &i in &kept {
        for &l in &inst.clauses[i] {
            let v = l.unsigned_abs() as usize - 1;
            if l > 0 {
                occ[v].0 += 1;
            } else {
                occ[v].1 += 1;
            }
        }
    }
    let mut origin = Vec::new();
    let mut rename = vec![0i32; inst.variable_count];
    for (v, &(p, n)) in occ.iter().enumerate() {
        let flipped = match (p, n) {
            (0, 0) => continue,
            (1, 1) | (2, 1) => false,
            (1, 2) => true,
            _ => {
                return Err(ReductionError::OutsideFragment(format!(
                    "variable {} occurs {} times; at most three occurrences are allowed",
                    v + 1,
                    p + n
                )))
            }
        };
        origin.push(VarOrigin {
            original: v as u32 + 1,
            flipped,
        });
        let id = origin.len() as i32;
        rename[v] = if flipped { -id } else { id };
    }
    let clauses = kept
        .iter()
        .map(|&i| {
            inst.clauses[i]
                .iter()
                .map(|&l| {
                    let r = rename[l.unsigned_abs() as usize - 1];
                    if l > 0 {
                        r
                    } else {
                        -r
                    }
                })
                .collect()
        })
        .collect();
    let instance = SatInstance::new(origin.len(), clauses);
    debug_assert!(instance.is_normalized());
    Ok(Normalized {
        instance,
        origin,
        forced,
        kept_clauses: kept,
        original_variable_count: inst.variable_count,
    })
}

/// Largest variable count accepted by [`sat_brute`].
pub const SAT_BRUTE_MAX_VARIABLES: usize = 24;

/// Exhaustive satisfiability check. Returns the satisfying assignment whose
/// bit pattern (variable `i` is bit `i − 1`) is smallest.
pub fn sat_brute(inst: &SatInstance) -> Result<Option<Vec<bool>>, ReductionError> {
    let n = inst.variable_count;
    if n > SAT_BRUTE_MAX_VARIABLES {
        return Err(ReductionError::SizeBudget(format!(
            "{n} variables exceed the brute-force limit of {SAT_BRUTE_MAX_VARIABLES}"
        )));
    }
    // clause masks: (positive mask, negative mask)
    let masks: Vec<(u32, u32)> = inst
        .clauses
        .iter()
        .map(|c| {
            c.iter().fold((0, 0), |(p, q), &l| {
                let bit = 1u32 << (l.unsigned_abs() - 1);
                if l > 0 {
                    (p | bit, q)
                } else {
                    (p, q | bit)
                }
            })
        })
        .collect();
    for pattern in 0u32..(1u32 << n) {
        if masks
            .iter()
            .all(|&(p, q)| pattern & p != 0 || !pattern & q != 0)
        {
            return Ok(Some((0..n).map(|i| pattern >> i & 1 == 1).collect()));
        }
    }
    Ok(None)
}

/// Every satisfying assignment, in ascending bit-pattern order.
pub fn all_satisfying(inst: &SatInstance) -> Result<Vec<Vec<bool>>, ReductionError> {
    let n = inst.variable_count;
    if n > SAT_BRUTE_MAX_VARIABLES {
        return Err(ReductionError::SizeBudget(format!("{n} variables")));
    }
    Ok((0u32..(1u32 << n))
        .map(|p| (0..n).map(|i| p >> i & 1 == 1).collect::<Vec<bool>>())
        .filter(|v| inst.is_satisfied_by(v))
        .collect())
}

/// A random instance already in normal form with `variables` variables.
///
/// Each variable independently occurs twice (one positive, one negative)
/// or three times (two positive, one negative); the occurrences are
/// shuffled into 2- and 3-clauses over distinct variables.
pub fn random_instance(variables: usize, seed: u64) -> Result<SatInstance, ReductionError> {
    if variables < 2 {
        return Err(ReductionError::OutsideFragment(
            "need at least two variables".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pool: Vec<Literal> = Vec::new();
    for attempt in 0..10_000 {
        if attempt % 50 == 0 {
            // some occurrence profiles admit no placement; redraw them
            pool.clear();
            for v in 1..=variables as Literal {
                pool.extend([v, -v]);
                if rng.gen_bool(0.5) {
                    pool.push(v);
                }
            }
        }
        pool.shuffle(&mut rng);
        let mut clauses: Vec<Vec<Literal>> = Vec::new();
        let mut rest = pool.as_slice();
        let mut ok = true;
        while !rest.is_empty() {
            let size = match rest.len() {
                2 | 3 => rest.len(),
                4 => 2,
                _ => {
                    if rng.gen_bool(0.5) {
                        2
                    } else {
                        3
                    }
                }
            };
            let (c, r) = rest.split_at(size);
            let mut vars: Vec<u32> = c.iter().map(|l| l.unsigned_abs()).collect();
            vars.sort_unstable();
            vars.dedup();
            if vars.len() != size {
                ok = false;
                break;
            }
            clauses.push(c.to_vec());
            rest = r;
        }
        if ok {
            let inst = SatInstance::new(variables, clauses);
            debug_assert!(inst.is_normalized());
            return Ok(inst);
        }
    }
    Err(ReductionError::OutsideFragment(
        "could not place occurrences into clauses over distinct variables".into(),
    ))
}

/// The running example: `(x1 ∨ x2)(x1 ∨ x3)(¬x1 ∨ ¬x2 ∨ x4)(x2 ∨ x3)(¬x3 ∨ ¬x4)`.
pub fn example_instance() -> SatInstance {
    SatInstance::new(
        4,
        vec![
            vec![1, 2],
            vec![1, 3],
            vec![-1, -2, 4],
            vec![2, 3],
            vec![-3, -4],
        ],
    )
}
