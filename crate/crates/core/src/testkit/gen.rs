use rand::seq::SliceRandom;
use rand::Rng as _;

use super::Rng;
use crate::decimal::Decimal;
use crate::model::{
    AssuranceCase, AwayRef, Bundle, CaseId, CaseKind, Capability, ConcernKind, Direction, Edge, EdgeKind, Element,
    ElementId, ElementKind,
};
use crate::validate::units::{Dimension, UnitTable};

const STATEMENT_CHARS: &[char] = &[
    'a', 'b', 'e', 'z', 'Q', '0', '7', ' ', ' ', '.', ',', '-', '(', ')', '/', ':', '"', '\\', 'é', 'µ', '◇', '°',
];

const BUILTIN_UNITS: &[&str] = &[
    "W", "mW", "kW", "J", "kJ", "s", "ms", "min", "Hz", "kHz", "MHz", "m", "mm", "cm", "degC", "W_per_cm2",
];

fn eid(text: impl Into<String>) -> ElementId {
    ElementId::new(text).expect("generated ids are valid")
}

fn cid(text: impl Into<String>) -> CaseId {
    CaseId::new(text).expect("generated ids are valid")
}

pub fn statement(rng: &mut Rng) -> String {
    let len = rng.gen_range(0..24);
    (0..len).map(|_| *STATEMENT_CHARS.choose(rng).unwrap()).collect()
}

/// Identifier starting with an uppercase letter, so it never collides with
/// a DSL keyword.
pub fn identifier(rng: &mut Rng, n: usize) -> String {
    const TAILS: &[&str] = &["", "_a", "-b", "x9", "_-", "Z"];
    let head = (b'A' + rng.gen_range(0..26u8)) as char;
    format!("{head}{n}{}", TAILS.choose(rng).unwrap())
}

/// A decimal with up to four fraction digits, possibly negative.
pub fn decimal(rng: &mut Rng) -> Decimal {
    Decimal::from_scaled(rng.gen_range(-1_000_000i64..1_000_000), rng.gen_range(0..5))
}

pub fn interval(rng: &mut Rng) -> (Decimal, Decimal) {
    let (a, b) = (decimal(rng), decimal(rng));
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// A case that parses without diagnostics: unique ids, flags only where the
/// model allows them, no duplicate edges, capabilities matching the kind.
/// Graph structure is arbitrary (it need not pass the G rules).
pub fn random_case(rng: &mut Rng, max_elements: usize) -> AssuranceCase {
    let kind = *CaseKind::ALL.choose(rng).unwrap();
    let n = rng.gen_range(0..100);
    let mut case = AssuranceCase::new(cid(identifier(rng, n)), kind);
    if kind == CaseKind::Clinical {
        case.associated_tac = Some(cid(identifier(rng, 1000)));
    }

    let direction = match kind {
        CaseKind::Technological => Some(Direction::Provided),
        CaseKind::Clinical => Some(Direction::Required),
        CaseKind::Monolithic => None,
    };
    if let Some(direction) = direction {
        for i in 0..rng.gen_range(0..4) {
            let (low, high) = interval(rng);
            let unit = *BUILTIN_UNITS.choose(rng).unwrap();
            case.capabilities
                .push(Capability::new(format!("cap_{i}"), direction, unit, low, high));
        }
    }

    let n = rng.gen_range(0..=max_elements);
    for i in 0..n {
        let kind = *ElementKind::ALL.choose(rng).unwrap();
        let mut e = Element::new(eid(identifier(rng, i)), kind, statement(rng));
        if rng.gen_bool(0.3) {
            e.concern = Some(*ConcernKind::ALL.choose(rng).unwrap());
        }
        if kind == ElementKind::Claim {
            e.is_root = rng.gen_bool(0.2);
            e.is_public = rng.gen_bool(0.3);
            e.is_undeveloped = rng.gen_bool(0.3);
            e.is_module = rng.gen_bool(0.2);
            if e.is_undeveloped && rng.gen_bool(0.5) {
                e.away_ref = Some(AwayRef { case: cid(identifier(rng, 7)), element: eid(identifier(rng, 3)) });
            }
        }
        case.elements.push(e);
    }

    if n > 0 {
        let mut seen = std::collections::BTreeSet::new();
        for _ in 0..rng.gen_range(0..=2 * n) {
            let s = rng.gen_range(0..n);
            let t = rng.gen_range(0..n);
            let k = *EdgeKind::ALL.choose(rng).unwrap();
            if seen.insert((s, k, t)) {
                let (source, target) = (case.elements[s].id.clone(), case.elements[t].id.clone());
                case.edges.push(Edge::new(source, k, target));
            }
        }
    }
    case
}

/// Builds a monolithic case from `(kind)` nodes named `N0..` and index
/// edges, without any checking.
pub fn case_from_parts(kinds: &[ElementKind], edges: &[(usize, EdgeKind, usize)]) -> AssuranceCase {
    let mut case = AssuranceCase::new(cid("G"), CaseKind::Monolithic);
    for (i, &k) in kinds.iter().enumerate() {
        case.elements.push(Element::new(eid(format!("N{i}")), k, ""));
    }
    for &(s, k, t) in edges {
        case.edges.push(Edge::new(eid(format!("N{s}")), k, eid(format!("N{t}"))));
    }
    case
}

/// Every assignment of `kinds` to `n` nodes, each paired with every subset
/// of the n² possible `edge_kind` edges (self-loops included).
pub fn all_typed_graphs(n: usize, kinds: &[ElementKind], edge_kind: EdgeKind) -> impl Iterator<Item = AssuranceCase> + '_ {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|s| (0..n).map(move |t| (s, t))).collect();
    let labellings = kinds.len().pow(n as u32);
    (0..labellings).flat_map(move |labelling| {
        let mut code = labelling;
        let node_kinds: Vec<ElementKind> = (0..n)
            .map(|_| {
                let k = kinds[code % kinds.len()];
                code /= kinds.len();
                k
            })
            .collect();
        let pairs = pairs.clone();
        (0u32..(1 << pairs.len())).map(move |mask| {
            let edges: Vec<_> = pairs
                .iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .map(|(_, &(s, t))| (s, edge_kind, t))
                .collect();
            case_from_parts(&node_kinds, &edges)
        })
    })
}

/// Arbitrary typed digraph over `kinds`, both edge kinds, self-loops allowed.
pub fn random_typed_graph(rng: &mut Rng, max_nodes: usize, kinds: &[ElementKind]) -> AssuranceCase {
    let n = rng.gen_range(1..=max_nodes);
    let node_kinds: Vec<ElementKind> = (0..n).map(|_| *kinds.choose(rng).unwrap()).collect();
    let density = rng.gen_range(0.02..0.25);
    let mut edges = Vec::new();
    for s in 0..n {
        for t in 0..n {
            for k in EdgeKind::ALL {
                if rng.gen_bool(density) {
                    edges.push((s, k, t));
                }
            }
        }
    }
    case_from_parts(&node_kinds, &edges)
}

/// Random supportedBy DAG over claims (edges only from lower to higher
/// index), plus a few contexts attached by inContextOf.
pub fn random_dag(rng: &mut Rng, n: usize) -> AssuranceCase {
    let mut kinds = vec![ElementKind::Claim; n];
    let contexts = n / 5;
    for k in kinds.iter_mut().skip(n - contexts) {
        *k = ElementKind::Context;
    }
    let claims = n - contexts;
    let mut edges = Vec::new();
    for t in 1..claims {
        for _ in 0..rng.gen_range(1..=2) {
            edges.push((rng.gen_range(0..t), EdgeKind::SupportedBy, t));
        }
    }
    for c in claims..n {
        if claims > 0 {
            edges.push((rng.gen_range(0..claims), EdgeKind::InContextOf, c));
        }
    }
    edges.sort();
    edges.dedup();
    case_from_parts(&kinds, &edges)
}

fn can_support(parent: ElementKind, child: ElementKind) -> bool {
    use ElementKind::*;
    matches!((parent, child), (Claim, Claim | Strategy | Evidence) | (Strategy, Claim))
}

/// Tree-grown case passing G1-G7: a root claim, children attached to
/// claims and strategies with legal edge kinds, a few extra forward edges,
/// childless strategies demoted to claims and bare leaf claims marked
/// undeveloped.
pub fn grow_case(rng: &mut Rng, id: &str, kind: CaseKind, size: usize) -> AssuranceCase {
    use ElementKind::*;
    let mut case = AssuranceCase::new(cid(id), kind);
    let mut root = Element::new(eid("C0"), Claim, statement(rng));
    root.is_root = true;
    case.elements.push(root);

    let mut i = 1;
    while case.elements.len() < size.max(1) {
        let parents: Vec<usize> = (0..case.elements.len())
            .filter(|&p| matches!(case.elements[p].kind, Claim | Strategy))
            .collect();
        let p = *parents.choose(rng).unwrap();
        let options: &[ElementKind] = if case.elements[p].kind == Claim {
            &[Claim, Claim, Strategy, Evidence, Context, Assumption, Justification]
        } else {
            &[Claim, Claim, Context, Assumption, Justification]
        };
        let k = *options.choose(rng).unwrap();
        let prefix = match k {
            Claim => "C",
            Strategy => "S",
            Evidence => "E",
            Context => "X",
            Assumption => "A",
            Justification => "J",
        };
        let mut e = Element::new(eid(format!("{prefix}{i}")), k, statement(rng));
        if k == Claim {
            e.is_module = rng.gen_bool(0.1);
            if rng.gen_bool(0.3) {
                e.concern = Some(*ConcernKind::ALL.choose(rng).unwrap());
            }
        }
        let edge_kind = if k.is_contextual() { EdgeKind::InContextOf } else { EdgeKind::SupportedBy };
        case.edges.push(Edge::new(case.elements[p].id.clone(), edge_kind, e.id.clone()));
        case.elements.push(e);
        i += 1;
    }

    let n = case.elements.len();
    for _ in 0..rng.gen_range(0..=n / 4) {
        if n < 2 {
            break;
        }
        let a = rng.gen_range(0..n - 1);
        let b = rng.gen_range(a + 1..n);
        let (ka, kb) = (case.elements[a].kind, case.elements[b].kind);
        let edge_kind = if kb.is_contextual() && matches!(ka, Claim | Strategy) {
            EdgeKind::InContextOf
        } else if can_support(ka, kb) {
            EdgeKind::SupportedBy
        } else {
            continue;
        };
        let edge = Edge::new(case.elements[a].id.clone(), edge_kind, case.elements[b].id.clone());
        if !case.edges.iter().any(|e| e.source == edge.source && e.kind == edge.kind && e.target == edge.target) {
            case.edges.push(edge);
        }
    }

    let supports = |case: &AssuranceCase, idx: usize, pred: &dyn Fn(ElementKind) -> bool| {
        let id = &case.elements[idx].id;
        case.edges.iter().any(|e| {
            &e.source == id
                && e.kind == EdgeKind::SupportedBy
                && case.element(&e.target).is_some_and(|t| pred(t.kind))
        })
    };
    for idx in 0..n {
        if case.elements[idx].kind == Strategy && !supports(&case, idx, &|_| true) {
            case.elements[idx].kind = Claim;
        }
    }
    for idx in 0..n {
        let e = &case.elements[idx];
        if e.kind == Claim
            && !supports(&case, idx, &|k| matches!(k, Claim | Strategy))
            && !supports(&case, idx, &|k| k == Evidence)
        {
            case.elements[idx].is_undeveloped = true;
        }
    }
    case
}

/// A bundle that resolves and passes every G and S rule with no Errors,
/// at most `max_total` elements over all cases (`max_total` ≥ 20).
pub fn random_valid_bundle(rng: &mut Rng, max_total: usize) -> Bundle {
    use ElementKind::*;
    let tac_size = rng.gen_range(2..=10);
    let mut tac = grow_case(rng, "TAC", CaseKind::Technological, tac_size);
    let claims: Vec<usize> = (0..tac.elements.len()).filter(|&i| tac.elements[i].kind == Claim).collect();
    for &c in &claims {
        tac.elements[c].is_public = rng.gen_bool(0.5);
    }
    let first = *claims.choose(rng).unwrap();
    tac.elements[first].is_public = true;
    let public: Vec<usize> = claims.into_iter().filter(|&c| tac.elements[c].is_public).collect();

    let n_cacs = rng.gen_range(1..=3);
    let per = (max_total - tac.elements.len()) / n_cacs;
    let mut cacs = Vec::new();
    for k in 0..n_cacs {
        let size = rng.gen_range(2..=per.saturating_sub(4).max(2));
        let mut cac = grow_case(rng, &format!("CAC{k}"), CaseKind::Clinical, size);
        cac.associated_tac = Some(tac.id.clone());

        let mut leaves: Vec<usize> = (1..cac.elements.len())
            .filter(|&i| {
                let e = &cac.elements[i];
                e.kind == Claim && !cac.edges.iter().any(|x| x.source == e.id && x.kind == EdgeKind::SupportedBy)
            })
            .collect();
        leaves.shuffle(rng);
        leaves.truncate(rng.gen_range(0..=2));
        if leaves.is_empty() {
            let claim = Element::new(eid("CA"), Claim, "");
            cac.edges.push(Edge::new(eid("C0"), EdgeKind::SupportedBy, claim.id.clone()));
            cac.elements.push(claim);
            leaves.push(cac.elements.len() - 1);
        }
        for (j, &leaf) in leaves.iter().enumerate() {
            let target = &tac.elements[*public.choose(rng).unwrap()];
            let claim = &mut cac.elements[leaf];
            claim.is_undeveloped = true;
            claim.away_ref = Some(AwayRef { case: tac.id.clone(), element: target.id.clone() });
            claim.statement = target.statement.clone();
            let context = Element::new(eid(format!("XA{j}")), Context, "");
            cac.edges.push(Edge::new(claim.id.clone(), EdgeKind::InContextOf, context.id.clone()));
            cac.elements.push(context);
        }
        cacs.push(cac);
    }
    Bundle::new("random", tac, cacs).expect("generated bundle is well-formed")
}

/// A unit of `dimension` from the table, chosen uniformly.
pub fn unit_of(rng: &mut Rng, units: &UnitTable, dimension: Dimension) -> String {
    let mut symbols: Vec<&str> = units
        .iter()
        .filter(|u| u.dimension == dimension)
        .map(|u| u.symbol.as_str())
        .collect();
    symbols.sort_unstable();
    symbols.choose(rng).unwrap().to_string()
}

/// A capability with a random dimension-compatible unit and interval.
pub fn capability(rng: &mut Rng, units: &UnitTable, name: &str, direction: Direction) -> Capability {
    let mut dimensions: Vec<Dimension> = units.iter().map(|u| u.dimension).collect();
    dimensions.sort_by_key(|d| d.name());
    dimensions.dedup();
    let dimension = *dimensions.choose(rng).unwrap();
    let unit = unit_of(rng, units, dimension);
    let (low, high) = interval(rng);
    Capability::new(name, direction, unit, low, high)
}
