//! The full pipeline as a serializable report.

use std::time::Instant;

use serde::Serialize;

use orbitcell::apps::{change_of_variables, evaluate_degree, normalized_class, targets, TARGET_NAMES};
use orbitcell::chern::MONOMIAL_LABELS;
use orbitcell::error::FamilyError;
use orbitcell::exact::{rat, rational_to_pq, Rational};
use orbitcell::families::{family_catalog, relation, FamilyRelation, FamilySpec};
use orbitcell::solver::{solve_exact, Solution};

pub const COMPUTED: &str = "computed";

#[derive(Clone, Debug, Serialize)]
pub struct Quantity {
    pub value: String,
    pub provenance: String,
}

impl Quantity {
    fn computed(r: &Rational) -> Self {
        Quantity { value: rational_to_pq(r), provenance: COMPUTED.into() }
    }

    fn cited(r: &Rational, provenance: &str) -> Self {
        Quantity { value: rational_to_pq(r), provenance: provenance.into() }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VectorQuantity {
    pub labels: Vec<String>,
    pub value: Vec<String>,
    pub provenance: String,
}

impl VectorQuantity {
    fn computed(v: &[Rational]) -> Self {
        VectorQuantity {
            labels: MONOMIAL_LABELS.iter().map(|s| s.to_string()).collect(),
            value: v.iter().map(rational_to_pq).collect(),
            provenance: COMPUTED.into(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FamilyBlock {
    pub name: String,
    pub description: String,
    pub ring: String,
    pub vclass: String,
    pub vector: VectorQuantity,
    pub rhs: Quantity,
    /// vector · solution - rhs
    pub residual: Quantity,
    /// ∫ (v1^2 v2 - v1 v3 + 9 v4)
    pub normalized_pairing: Quantity,
}

#[derive(Clone, Debug, Serialize)]
pub struct SolutionBlock {
    pub coefficients: VectorQuantity,
    pub rank: usize,
    pub residuals: Vec<Quantity>,
}

#[derive(Clone, Debug, Serialize)]
pub struct DegreeBlock {
    pub target: String,
    pub degree: Quantity,
    pub expected: Quantity,
    pub matches_expected: bool,
    pub divisible_by_1080: bool,
    pub quotient_by_1080: Quantity,
}

#[derive(Clone, Debug, Serialize)]
pub struct ChangeOfVariablesBlock {
    pub content: Quantity,
    pub normalized: String,
    pub full: String,
    pub note: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct ApplicationsBlock {
    pub degrees: Vec<DegreeBlock>,
    pub change_of_variables: ChangeOfVariablesBlock,
}

#[derive(Clone, Debug, Serialize)]
pub struct Meta {
    pub engine: String,
    pub version: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u128>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub families: Vec<FamilyBlock>,
    pub solution: SolutionBlock,
    pub applications: ApplicationsBlock,
    pub meta: Meta,
}

/// Relations for the whole catalog, one thread per family, in catalog order.
pub fn catalog_relations(catalog: &[FamilySpec]) -> Result<Vec<FamilyRelation>, FamilyError> {
    std::thread::scope(|s| {
        let handles: Vec<_> = catalog.iter().map(|f| s.spawn(move || relation(f))).collect();
        handles.into_iter().map(|h| h.join().expect("family thread panicked")).collect()
    })
}

pub fn family_block(f: &FamilySpec, r: &FamilyRelation, solution: Option<&Solution>) -> Result<FamilyBlock, FamilyError> {
    let residual = match solution {
        Some(s) => r.residual(s.solution.entries()),
        None => rat(0),
    };
    Ok(FamilyBlock {
        name: f.name.into(),
        description: f.description.into(),
        ring: f.ring.name().into(),
        vclass: f.kclass()?.to_string(),
        vector: VectorQuantity::computed(r.vector.entries()),
        rhs: Quantity::cited(&r.rhs, f.provenance),
        residual: Quantity::computed(&residual),
        normalized_pairing: Quantity::computed(&r.vector.dot(&normalized_class())),
    })
}

pub fn build_report(with_timing: bool) -> Result<Report, FamilyError> {
    let start = Instant::now();
    let catalog = family_catalog()?;
    let relations = catalog_relations(&catalog)?;
    let solution = solve_exact(&relations)?;

    let families = catalog
        .iter()
        .zip(&relations)
        .map(|(f, r)| family_block(f, r, Some(&solution)))
        .collect::<Result<Vec<_>, _>>()?;

    let solution_block = SolutionBlock {
        coefficients: VectorQuantity::computed(solution.solution.entries()),
        rank: solution.rank,
        residuals: solution.residuals.iter().map(Quantity::computed).collect(),
    };

    let mut degrees = Vec::new();
    for t in targets()?.iter().filter(|t| TARGET_NAMES.contains(&t.name.as_str())) {
        let d = evaluate_degree(t, &solution.solution)?;
        let q = &d / rat(1080);
        degrees.push(DegreeBlock {
            target: t.name.clone(),
            matches_expected: d == t.expected_degree,
            divisible_by_1080: q.is_integer(),
            quotient_by_1080: Quantity::computed(&q),
            degree: Quantity::computed(&d),
            expected: Quantity::cited(&t.expected_degree, &t.provenance),
        });
    }

    let cv = change_of_variables()?;
    let change = ChangeOfVariablesBlock {
        content: Quantity::computed(&cv.content),
        normalized: cv.normalized.to_string_descending(),
        full: cv.full.to_string_descending(),
        note: "v_i = c_i(V^v (x) det V); the full class is the content times the normalized polynomial, and which of the two is the orbit class of the map from the stack of cubic forms is left open".into(),
    };

    Ok(Report {
        families,
        solution: solution_block,
        applications: ApplicationsBlock { degrees, change_of_variables: change },
        meta: Meta {
            engine: "orbitcell".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            timing_ms: with_timing.then(|| start.elapsed().as_millis()),
        },
    })
}

/// "p/1" as "p"; other fractions unchanged.
pub fn plain(pq: &str) -> &str {
    pq.strip_suffix("/1").unwrap_or(pq)
}

fn plain_all(v: &[String]) -> String {
    v.iter().map(|s| plain(s)).collect::<Vec<_>>().join(", ")
}

pub fn render_text(r: &Report) -> String {
    let mut out = String::new();
    out.push_str("families\n");
    for f in &r.families {
        out.push_str(&format!(
            "  {:<11} ({}) [{}]  rhs {}  residual {}\n",
            f.name,
            plain_all(&f.vector.value),
            f.ring,
            plain(&f.rhs.value),
            plain(&f.residual.value)
        ));
    }
    out.push_str(&format!(
        "solution\n  ({})  rank {}\n",
        plain_all(&r.solution.coefficients.value),
        r.solution.rank
    ));
    out.push_str("applications\n");
    for d in &r.applications.degrees {
        out.push_str(&format!(
            "  {:<26} {}  = 1080 * {}  (expected {})\n",
            d.target,
            plain(&d.degree.value),
            plain(&d.quotient_by_1080.value),
            plain(&d.expected.value)
        ));
    }
    let cv = &r.applications.change_of_variables;
    out.push_str(&format!("  normalized class in c: {}\n", cv.normalized));
    out.push_str(&format!("  full class in c:       {}\n", cv.full));
    out
}
