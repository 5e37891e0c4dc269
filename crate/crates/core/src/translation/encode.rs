use splitnet_milp::{LinExpr, MilpModel, Rational, Relation, VarId, VarKind};

use super::{source_classes, EncodingParams, ParamError};
use crate::network::ReactionNetwork;

/// Index arithmetic for the variable blocks, declared in the order
/// `Ỹ, Γ̃t, Γ̃s, Ãt, Ãs, B̃t, B̃s, Δ, Λ`. All indices here are 0-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Layout {
    pub m: usize,
    pub n: usize,
    pub r: usize,
    pub q: usize,
}

impl Layout {
    fn off_gt(&self) -> usize {
        self.m * self.n
    }
    fn off_gs(&self) -> usize {
        self.off_gt() + self.m * self.r * self.q
    }
    fn off_at(&self) -> usize {
        self.off_gs() + self.m * self.r
    }
    fn off_as(&self) -> usize {
        self.off_at() + self.n * self.r * self.q
    }
    fn off_bt(&self) -> usize {
        self.off_as() + self.n * self.r
    }
    fn off_bs(&self) -> usize {
        self.off_bt() + self.n * self.r
    }
    fn off_d(&self) -> usize {
        self.off_bs() + self.n * self.r
    }
    fn off_l(&self) -> usize {
        self.off_d() + self.n * self.r * self.q
    }
    pub fn num_vars(&self) -> usize {
        self.off_l() + self.r * self.q
    }

    pub fn y(&self, i: usize, j: usize) -> VarId {
        VarId(i * self.n + j)
    }
    pub fn gt(&self, i: usize, k: usize, l: usize) -> VarId {
        VarId(self.off_gt() + (i * self.r + k) * self.q + l)
    }
    pub fn gs(&self, i: usize, k: usize) -> VarId {
        VarId(self.off_gs() + i * self.r + k)
    }
    pub fn at(&self, j: usize, k: usize, l: usize) -> VarId {
        VarId(self.off_at() + (j * self.r + k) * self.q + l)
    }
    pub fn as_(&self, j: usize, k: usize) -> VarId {
        VarId(self.off_as() + j * self.r + k)
    }
    pub fn bt(&self, j: usize, k: usize) -> VarId {
        VarId(self.off_bt() + j * self.r + k)
    }
    pub fn bs(&self, j: usize, k: usize) -> VarId {
        VarId(self.off_bs() + j * self.r + k)
    }
    pub fn d(&self, j: usize, k: usize, l: usize) -> VarId {
        VarId(self.off_d() + (j * self.r + k) * self.q + l)
    }
    pub fn lam(&self, k: usize, l: usize) -> VarId {
        VarId(self.off_l() + k * self.q + l)
    }

    /// Stoichiometric variables: an optimum touching big-M here means the
    /// bound may be cutting off better solutions.
    pub(crate) fn saturable(&self) -> std::ops::Range<usize> {
        0..self.off_at()
    }

    /// Certificate flows.
    pub(crate) fn flows(&self) -> std::ops::Range<usize> {
        self.off_bt()..self.off_d()
    }
}

#[derive(Debug, Clone)]
pub struct Encoding {
    pub model: MilpModel,
    pub layout: Layout,
}

fn q(v: i64) -> Rational {
    Rational::from(v)
}

/// Builds the translation program for `net` under `p`.
///
/// Besides the published constraint families, two groups are added:
/// column coupling of `B̃` (`Σ_j B̃t = Σ_j B̃s` per reaction), without which
/// balanced rows do not imply that every edge lies on a cycle; and source
/// consistency (reactions sharing an original source share `Ãs`, distinct
/// sources never share a vertex), which the kinetic-order assignment
/// `ỹ′(β(k)) = y(ρ(k))` needs to be well defined.
pub fn encode(net: &ReactionNetwork, p: &EncodingParams) -> Result<Encoding, ParamError> {
    p.validate(net)?;
    let (m, n, r, nq) = (net.num_species(), p.n_vertices, net.num_reactions(), p.q);
    let lay = Layout { m, n, r, q: nq };
    let mats = net.matrices();
    let big = p.big_m.clone();
    let eps = p.epsilon.clone();
    let mut model = MilpModel::new();
    let mut var = |name: String, kind: VarKind, upper: Option<Rational>| {
        model.add_variable(name, kind, upper).expect("generated names are unique");
    };

    for i in 0..m {
        for j in 0..n {
            var(format!("Y_{}_{}", i + 1, j + 1), VarKind::Continuous, Some(big.clone()));
        }
    }
    for i in 0..m {
        for k in 0..r {
            for l in 0..nq {
                var(format!("Gt_{}_{}_{}", i + 1, k + 1, l + 1), VarKind::Continuous, Some(big.clone()));
            }
        }
    }
    for i in 0..m {
        for k in 0..r {
            var(format!("Gs_{}_{}", i + 1, k + 1), VarKind::Continuous, Some(big.clone()));
        }
    }
    for j in 0..n {
        for k in 0..r {
            for l in 0..nq {
                var(format!("At_{}_{}_{}", j + 1, k + 1, l + 1), VarKind::Binary, None);
            }
        }
    }
    for j in 0..n {
        for k in 0..r {
            var(format!("As_{}_{}", j + 1, k + 1), VarKind::Binary, None);
        }
    }
    for (prefix, _) in [("Bt", ()), ("Bs", ())] {
        for j in 0..n {
            for k in 0..r {
                var(format!("{prefix}_{}_{}", j + 1, k + 1), VarKind::Continuous, None);
            }
        }
    }
    for j in 0..n {
        for k in 0..r {
            for l in 0..nq {
                var(format!("D_{}_{}_{}", j + 1, k + 1, l + 1), VarKind::Binary, None);
            }
        }
    }
    for k in 0..r {
        for l in 0..nq {
            var(format!("L_{}_{}", k + 1, l + 1), VarKind::Binary, None);
        }
    }
    debug_assert_eq!(model.num_vars(), lay.num_vars());

    let mut add = |name: String, e: LinExpr, rel: Relation, rhs: Rational| {
        model.add_constraint(name, e, rel, rhs).expect("variables are declared");
    };

    // Stoic: Σ_l (Γ̃t − Γ̃s) = Γt − Γs.
    for i in 0..m {
        for k in 0..r {
            let mut e = LinExpr::new().with(lay.gs(i, k), -(nq as i64));
            for l in 0..nq {
                e = e.with(lay.gt(i, k, l), 1);
            }
            add(format!("stoic_{}_{}", i + 1, k + 1), e, Relation::Eq, mats.gamma[i][k].clone());
        }
    }

    // Incidence 1.
    for i in 0..m {
        for j in 0..n {
            for k in 0..r {
                let (y, gs, a) = (lay.y(i, j), lay.gs(i, k), lay.as_(j, k));
                let lo = LinExpr::new().with(y, 1).with(gs, -1).with(a, big.clone());
                add(format!("inc1s_lo_{}_{}_{}", i + 1, j + 1, k + 1), lo, Relation::Le, big.clone());
                let hi = LinExpr::new().with(gs, 1).with(y, -1).with(a, big.clone());
                add(format!("inc1s_hi_{}_{}_{}", i + 1, j + 1, k + 1), hi, Relation::Le, big.clone());
                for l in 0..nq {
                    let (gt, a) = (lay.gt(i, k, l), lay.at(j, k, l));
                    let lo = LinExpr::new().with(y, 1).with(gt, -1).with(a, big.clone());
                    add(format!("inc1t_lo_{}_{}_{}_{}", i + 1, j + 1, k + 1, l + 1), lo, Relation::Le, big.clone());
                    let hi = LinExpr::new().with(gt, 1).with(y, -1).with(a, big.clone());
                    add(format!("inc1t_hi_{}_{}_{}_{}", i + 1, j + 1, k + 1, l + 1), hi, Relation::Le, big.clone());
                }
            }
        }
    }

    // Incidence 2.
    for k in 0..r {
        let e = LinExpr::from_terms((0..n).map(|j| (lay.as_(j, k), q(1))));
        add(format!("inc2s_{}", k + 1), e, Relation::Eq, q(1));
        for l in 0..nq {
            let e = LinExpr::from_terms((0..n).map(|j| (lay.at(j, k, l), q(1))));
            add(format!("inc2t_{}_{}", k + 1, l + 1), e, Relation::Eq, q(1));
        }
    }

    // Weak reversibility: B̃·1 = 0, structural equivalence bounds, and
    // column coupling.
    for j in 0..n {
        let mut e = LinExpr::new();
        for k in 0..r {
            e = e.with(lay.bt(j, k), 1).with(lay.bs(j, k), -1);
        }
        add(format!("wr_row_{}", j + 1), e, Relation::Eq, q(0));
    }
    for k in 0..r {
        let mut e = LinExpr::new();
        for j in 0..n {
            e = e.with(lay.bt(j, k), 1).with(lay.bs(j, k), -1);
        }
        add(format!("wr_col_{}", k + 1), e, Relation::Eq, q(0));
    }
    for j in 0..n {
        for k in 0..r {
            let (bs, bt, a) = (lay.bs(j, k), lay.bt(j, k), lay.as_(j, k));
            add(format!("wr_bs_lo_{}_{}", j + 1, k + 1), LinExpr::new().with(a, eps.clone()).with(bs, -1), Relation::Le, q(0));
            add(format!("wr_bs_hi_{}_{}", j + 1, k + 1), LinExpr::new().with(bs, 1).with(a, -&big), Relation::Le, q(0));
            let mut lo = LinExpr::new().with(bt, -1);
            let mut hi = LinExpr::new().with(bt, 1);
            for l in 0..nq {
                lo = lo.with(lay.at(j, k, l), eps.clone());
                hi = hi.with(lay.at(j, k, l), -&big);
            }
            add(format!("wr_bt_lo_{}_{}", j + 1, k + 1), lo, Relation::Le, q(0));
            add(format!("wr_bt_hi_{}_{}", j + 1, k + 1), hi, Relation::Le, q(0));
        }
    }

    // Source consistency.
    let (cls, nv) = source_classes(net);
    let first: Vec<usize> = (0..nv).map(|c| cls.iter().position(|&x| x == c).unwrap()).collect();
    for k in 0..r {
        let k0 = first[cls[k]];
        if k0 != k {
            for j in 0..n {
                let e = LinExpr::new().with(lay.as_(j, k), 1).with(lay.as_(j, k0), -1);
                add(format!("src_same_{}_{}", j + 1, k + 1), e, Relation::Eq, q(0));
            }
        }
    }
    if nv > 1 {
        for j in 0..n {
            let e = LinExpr::from_terms(first.iter().map(|&k0| (lay.as_(j, k0), q(1))));
            add(format!("src_distinct_{}", j + 1), e, Relation::Le, q(1));
        }
    }

    // Efficiency 1, over 1-based indices with k ≥ j.
    if p.symmetry_breaking {
        for j in 1..=n {
            for k in j..=r {
                let mut e = LinExpr::new();
                for kp in 1..k {
                    e = e.with(lay.as_(j - 1, kp - 1), 1);
                }
                for jp in 1..j {
                    e = e.with(lay.as_(jp - 1, k - 1), -1);
                }
                if !e.is_empty() {
                    add(format!("eff1_{j}_{k}"), e, Relation::Ge, q(0));
                }
            }
        }
    }

    // Efficiency 2.
    for j in 0..n {
        for k in 0..r {
            for l in 0..nq {
                let (a, t, d) = (lay.as_(j, k), lay.at(j, k, l), lay.d(j, k, l));
                let tag = format!("{}_{}_{}", j + 1, k + 1, l + 1);
                add(format!("eff2_da_{tag}"), LinExpr::new().with(a, 1).with(t, -1).with(d, -1), Relation::Le, q(0));
                add(format!("eff2_db_{tag}"), LinExpr::new().with(t, 1).with(a, -1).with(d, -1), Relation::Le, q(0));
            }
        }
    }
    for k in 0..r {
        for l in 0..nq {
            let sum_d = || LinExpr::from_terms((0..n).map(|j| (lay.d(j, k, l), q(1))));
            let tag = format!("{}_{}", k + 1, l + 1);
            add(format!("eff2_lu_{tag}"), sum_d().with(lay.lam(k, l), -&big), Relation::Le, q(0));
            add(format!("eff2_ll_{tag}"), sum_d().with(lay.lam(k, l), big.clone()), Relation::Ge, q(0));
            if p.symmetry_breaking && l + 1 < nq {
                let e = LinExpr::new().with(lay.lam(k, l + 1), 1).with(lay.lam(k, l), -1);
                add(format!("eff2_ord_{tag}"), e, Relation::Le, q(0));
            }
        }
    }

    let mut obj = LinExpr::new();
    for i in 0..m {
        for j in 0..n {
            obj = obj.with(lay.y(i, j), 1);
        }
    }
    for k in 0..r {
        for l in 0..nq {
            obj = obj.with(lay.lam(k, l), 1);
        }
    }
    model.set_objective(obj).expect("variables are declared");
    Ok(Encoding { model, layout: lay })
}
