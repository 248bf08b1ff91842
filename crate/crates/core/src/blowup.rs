//! Blow-ups at coordinate-subspace centers and the chart bookkeeping they
//! produce.
//!
//! A blow-up at the subspace `V(x_i : i ∈ S)` (optionally translated so the
//! subspace passes through a given point) is covered by one affine chart per
//! center variable. In the chart of `x_j`, every other center variable
//! becomes `x_j · x_i′` with `x_i′` a fresh primed variable; `x_j` itself is
//! unchanged and cuts out the new exceptional divisor. Charts carry the
//! transformed ideal, the exceptional-divisor list, and the composed images
//! of the original ring's variables, so every chart knows its morphism back
//! to the very first ambient space.

use std::collections::BTreeSet;

use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::poly::{Order, Polynomial};
use crate::ring::PolyRing;

/// A blow-up center: the coordinate subspace `{x_i = p_i : i ∈ vars}` of a
/// chart's ambient space. The default point is the origin; plane-curve
/// resolution supplies nonzero points and the engine translates internally.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Center {
    vars: Vec<usize>,
    point: Vec<BigRational>,
}

impl Center {
    /// Center at the origin of the given coordinate subspace.
    pub fn new(ring: &PolyRing, vars: &[usize]) -> Result<Self> {
        let point = vec![BigRational::zero(); vars.len()];
        Center::at_point(ring, vars, point)
    }

    /// Center through a point: `{x_i = point[k] : i = vars[k]}`.
    pub fn at_point(ring: &PolyRing, vars: &[usize], point: Vec<BigRational>) -> Result<Self> {
        let set: BTreeSet<usize> = vars.iter().copied().collect();
        if set.len() != vars.len() {
            return Err(Error::InvariantViolation("repeated center variable".into()));
        }
        if let Some(&bad) = vars.iter().find(|&&i| i >= ring.num_vars()) {
            return Err(Error::VariableNotInRing {
                name: format!("#{bad}"),
            });
        }
        if set.len() < 2 {
            return Err(Error::CenterTooSmall);
        }
        if point.len() != vars.len() {
            return Err(Error::LengthMismatch {
                expected: vars.len(),
                got: point.len(),
            });
        }
        // keep vars sorted with point entries aligned
        let mut paired: Vec<(usize, BigRational)> =
            vars.iter().copied().zip(point).collect();
        paired.sort_by_key(|(i, _)| *i);
        let field = ring.field();
        let (vars, point): (Vec<_>, Vec<_>) = paired.into_iter().unzip();
        let point = point
            .iter()
            .map(|c| field.normalize(c))
            .collect::<Result<Vec<_>>>()?;
        Ok(Center { vars, point })
    }

    /// Sorted indices of the center variables.
    pub fn vars(&self) -> &[usize] {
        &self.vars
    }

    /// Point coordinates aligned with `vars()`.
    pub fn point(&self) -> &[BigRational] {
        &self.point
    }

    pub fn is_at_origin(&self) -> bool {
        self.point.iter().all(|c| c.is_zero())
    }

    /// Dimension of the center as a subvariety: ambient − |vars|.
    pub fn dimension(&self, ring: &PolyRing) -> u32 {
        (ring.num_vars() - self.vars.len()) as u32
    }

    /// Coordinate of the point at variable `i`, if `i` is a center variable.
    fn point_at(&self, i: usize) -> Option<&BigRational> {
        self.vars
            .iter()
            .position(|&v| v == i)
            .map(|k| &self.point[k])
    }

    pub fn display(&self, ring: &PolyRing) -> String {
        let parts: Vec<String> = self
            .vars
            .iter()
            .zip(&self.point)
            .map(|(&i, c)| {
                if c.is_zero() {
                    ring.name(i).to_string()
                } else {
                    format!("{}-{}", ring.name(i), crate::poly::fmt_rational(c))
                }
            })
            .collect();
        format!("({})", parts.join(","))
    }
}

/// How transformed ideals are computed in the new charts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TransformPolicy {
    /// Divide each generator by the highest power of the new exceptional
    /// variable dividing it.
    Strict,
    /// Divide every generator by exactly this power of the new exceptional
    /// variable (the controlled transform; the caller prescribes the power,
    /// typically the ideal's order along the center).
    Weak(u64),
}

/// One exceptional divisor as seen in a chart: the coordinate hypersurface
/// `{x_var = 0}`, tagged with the global blow-up step that created it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct ExceptionalDivisor {
    pub var: usize,
    pub birth: u64,
}

/// One affine chart of a (possibly iterated) blow-up.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Chart {
    /// Ambient polynomial ring of this chart.
    pub ring: PolyRing,
    /// Transformed generators of the variety's ideal.
    pub ideal: Vec<Polynomial>,
    /// Exceptional divisors visible as coordinate hypersurfaces here.
    pub exceptional: Vec<ExceptionalDivisor>,
    /// Image in this chart's ring of each variable of the original ring —
    /// the composed morphism back to the space everything started from.
    pub images: Vec<Polynomial>,
}

impl Chart {
    /// The chart a resolution starts from: identity images, no divisors.
    pub fn root(ring: &PolyRing, ideal: Vec<Polynomial>) -> Result<Self> {
        for g in &ideal {
            if g.ring() != ring {
                return Err(Error::RingMismatch);
            }
        }
        let images = (0..ring.num_vars())
            .map(|i| Polynomial::variable(ring, i))
            .collect();
        Ok(Chart {
            ring: ring.clone(),
            ideal,
            exceptional: Vec::new(),
            images,
        })
    }

    /// Names of the exceptional variables, in divisor order.
    pub fn exceptional_names(&self) -> Vec<&str> {
        self.exceptional
            .iter()
            .map(|d| self.ring.name(d.var))
            .collect()
    }

    /// Pretty-printed chart in the classical session style.
    pub fn describe(&self) -> String {
        let mut out = String::new();
        out.push_str("==== Ambient Space\n");
        out.push_str(&format!("{}\n", self.ring));
        out.push_str("==== Ideal of Variety:\n");
        if self.ideal.is_empty() {
            out.push_str("_[1]=0\n");
        }
        for (k, g) in self.ideal.iter().enumerate() {
            out.push_str(&format!("_[{}]={}\n", k + 1, g));
        }
        out.push_str("==== Exceptional Divisors:\n");
        for (k, d) in self.exceptional.iter().enumerate() {
            out.push_str(&format!("_[{}]={}\n", k + 1, self.ring.name(d.var)));
        }
        out.push_str("==== Images of variables of original ring:\n");
        for (k, im) in self.images.iter().enumerate() {
            out.push_str(&format!("_[{}]={}\n", k + 1, im));
        }
        out
    }
}

/// A chart produced by [`blow_up`], tagged with which center variable it
/// belongs to.
#[derive(Debug, Clone)]
pub struct ChildChart {
    pub chart_var: usize,
    pub chart: Chart,
}

/// Order of `f` along the (translated) coordinate subspace of `center`: the
/// minimum over terms of the total exponent in the center variables, after
/// moving the center's point to the origin.
pub fn order_along_center(f: &Polynomial, center: &Center) -> Result<Order> {
    let f = if center.is_at_origin() {
        f.clone()
    } else {
        let mut point = vec![BigRational::zero(); f.ring().num_vars()];
        for (&i, c) in center.vars.iter().zip(&center.point) {
            point[i] = c.clone();
        }
        f.translate(&point)?
    };
    Ok(f.terms()
        .map(|(m, _)| {
            center
                .vars
                .iter()
                .map(|&i| m.exponent(i) as u64)
                .sum::<u64>()
        })
        .min()
        .map_or(Order::Infinite, Order::Finite))
}

/// Order of the ideal along the center: the minimum over generators. This is
/// the natural power for a `Weak` transform.
pub fn ideal_order_along_center(ideal: &[Polynomial], center: &Center) -> Result<Order> {
    let mut best = Order::Infinite;
    for g in ideal {
        best = best.min(order_along_center(g, center)?);
    }
    Ok(best)
}

/// Divide `f` by the highest power of `var` dividing it. The result is not
/// divisible by `var` any more (idempotence).
pub fn strict_transform(f: &Polynomial, var: usize) -> Result<Polynomial> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    match f.order_in_var(var) {
        Order::Finite(0) => Ok(f.clone()),
        Order::Finite(k) => f.divide_by_var_power(var, k as u32),
        Order::Infinite => unreachable!("nonzero polynomial has finite order"),
    }
}

/// Blow up a chart at a center, producing one new chart per center variable.
///
/// `birth` is the global step index recorded on the new exceptional divisor.
/// Inherited divisors keep their slot (their variable may pick up a prime);
/// a divisor is dropped from a chart where its strict transform is no longer
/// a coordinate hypersurface — that happens for the chart variable's own
/// slot, and, for translated centers, for divisors not passing through the
/// blown-up point.
pub fn blow_up(
    parent: &Chart,
    center: &Center,
    policy: TransformPolicy,
    birth: u64,
) -> Result<Vec<ChildChart>> {
    if let Some(&bad) = center.vars.iter().find(|&&i| i >= parent.ring.num_vars()) {
        return Err(Error::VariableNotInRing {
            name: format!("#{bad}"),
        });
    }
    let mut children = Vec::with_capacity(center.vars.len());
    for &j in &center.vars {
        let primed: Vec<usize> = center.vars.iter().copied().filter(|&i| i != j).collect();
        let child_ring = parent.ring.primed_at(&primed)?;

        // Substitution images of the *parent* ring's variables, including the
        // translation that moves the center's point to the origin.
        let xj = Polynomial::variable(&child_ring, j);
        let mut sub = Vec::with_capacity(parent.ring.num_vars());
        for i in 0..parent.ring.num_vars() {
            let base = if i == j {
                xj.clone()
            } else if primed.contains(&i) {
                xj.mul(&Polynomial::variable(&child_ring, i))?
            } else {
                Polynomial::variable(&child_ring, i)
            };
            let image = match center.point_at(i) {
                Some(c) if !c.is_zero() => {
                    base.add(&Polynomial::constant(&child_ring, c.clone())?)?
                }
                _ => base,
            };
            sub.push(image);
        }

        let mut ideal = Vec::with_capacity(parent.ideal.len());
        for g in &parent.ideal {
            if g.is_zero() {
                ideal.push(Polynomial::zero(&child_ring));
                continue;
            }
            let total = g.substitute(&sub)?;
            debug_assert_eq!(
                total.order_in_var(j),
                order_along_center(g, center)?,
                "exceptional order must equal the order along the center"
            );
            let transformed = match policy {
                TransformPolicy::Strict => strict_transform(&total, j)?,
                TransformPolicy::Weak(c) => total.divide_by_var_power(j, c as u32)?,
            };
            ideal.push(transformed);
        }

        let mut exceptional: Vec<ExceptionalDivisor> = parent
            .exceptional
            .iter()
            .filter(|d| {
                if d.var == j {
                    return false;
                }
                match center.point_at(d.var) {
                    Some(c) => c.is_zero(),
                    None => true,
                }
            })
            .copied()
            .collect();
        exceptional.push(ExceptionalDivisor { var: j, birth });

        let images = parent
            .images
            .iter()
            .map(|im| im.substitute(&sub))
            .collect::<Result<Vec<_>>>()?;

        children.push(ChildChart {
            chart_var: j,
            chart: Chart {
                ring: child_ring,
                ideal,
                exceptional,
                images,
            },
        });
    }
    Ok(children)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;
    use crate::parse::{parse_in_ring, parse_polynomials};

    fn whitney() -> (PolyRing, Chart) {
        let (ring, polys) =
            parse_polynomials(FieldSpec::Rational, &["x(1)^2 - x(2)*x(3)^2"]).unwrap();
        let chart = Chart::root(&ring, polys).unwrap();
        (ring, chart)
    }

    #[test]
    fn whitney_umbrella_chart_x3() {
        let (ring, root) = whitney();
        let center = Center::new(&ring, &[0, 2]).unwrap();
        assert_eq!(center.dimension(&ring), 1);
        let charts = blow_up(&root, &center, TransformPolicy::Strict, 1).unwrap();
        assert_eq!(charts.len(), 2);

        let c3 = &charts[1];
        assert_eq!(c3.chart_var, 2);
        let r3 = &c3.chart.ring;
        assert_eq!(r3.names(), &["x(1)'", "x(2)", "x(3)"]);
        assert_eq!(
            c3.chart.ideal,
            vec![parse_in_ring(r3, "x(1)'^2 - x(2)").unwrap()]
        );
        assert_eq!(c3.chart.exceptional_names(), vec!["x(3)"]);
        assert_eq!(c3.chart.exceptional[0].birth, 1);
        let expected_images = [
            parse_in_ring(r3, "x(3)*x(1)'").unwrap(),
            parse_in_ring(r3, "x(2)").unwrap(),
            parse_in_ring(r3, "x(3)").unwrap(),
        ];
        assert_eq!(c3.chart.images, expected_images);
    }

    #[test]
    fn whitney_umbrella_chart_x1_is_hyperbolic() {
        let (ring, root) = whitney();
        let center = Center::new(&ring, &[0, 2]).unwrap();
        let charts = blow_up(&root, &center, TransformPolicy::Strict, 1).unwrap();
        let c1 = &charts[0];
        assert_eq!(c1.chart_var, 0);
        let r1 = &c1.chart.ring;
        assert_eq!(r1.names(), &["x(1)", "x(2)", "x(3)'"]);
        assert_eq!(
            c1.chart.ideal,
            vec![parse_in_ring(r1, "1 - x(2)*x(3)'^2").unwrap()]
        );
    }

    #[test]
    fn zero_ideal_stays_zero() {
        let ring = PolyRing::new(FieldSpec::Rational, vec!["x", "y"]).unwrap();
        let root = Chart::root(&ring, vec![Polynomial::zero(&ring)]).unwrap();
        let center = Center::new(&ring, &[0, 1]).unwrap();
        for child in blow_up(&root, &center, TransformPolicy::Strict, 1).unwrap() {
            assert_eq!(child.chart.ideal.len(), 1);
            assert!(child.chart.ideal[0].is_zero());
        }
    }

    #[test]
    fn cusp_chart_y() {
        let (ring, polys) = parse_polynomials(FieldSpec::Rational, &["x^2 - y^3"]).unwrap();
        let root = Chart::root(&ring, polys).unwrap();
        let center = Center::new(&ring, &[0, 1]).unwrap();
        let charts = blow_up(&root, &center, TransformPolicy::Strict, 1).unwrap();
        let cy = &charts[1];
        let ry = &cy.chart.ring;
        assert_eq!(ry.names(), &["x'", "y"]);
        // total transform y^2 (x'^2 - y), strict transform x'^2 - y
        assert_eq!(
            cy.chart.ideal,
            vec![parse_in_ring(ry, "x'^2 - y").unwrap()]
        );
    }

    #[test]
    fn weak_transform_keeps_prescribed_power() {
        let (ring, polys) = parse_polynomials(FieldSpec::Rational, &["x^2 - y^3"]).unwrap();
        let root = Chart::root(&ring, polys).unwrap();
        let center = Center::new(&ring, &[0, 1]).unwrap();
        let ord = ideal_order_along_center(&root.ideal, &center).unwrap();
        assert_eq!(ord, Order::Finite(2));
        let charts = blow_up(&root, &center, TransformPolicy::Weak(2), 1).unwrap();
        let cy = &charts[1];
        // weak transform removes y^2 only: y^3 x'^2 / y^2 ... total is
        // y^2 x'^2 - y^3, so the weak transform is x'^2 - y (same as strict
        // here); in chart x the total is x^2 - x^3 y'^3 and weak = strict too.
        assert_eq!(
            cy.chart.ideal,
            vec![parse_in_ring(&cy.chart.ring, "x'^2 - y").unwrap()]
        );
    }

    #[test]
    fn translated_center_composes_translation() {
        // node of (x-2)^2 - (y-1)^2 at the point (2, 1)
        let (ring, polys) =
            parse_polynomials(FieldSpec::Rational, &["x^2 - 4*x - y^2 + 2*y + 3"]).unwrap();
        assert_eq!(ring.names(), &["x", "y"]);
        let root = Chart::root(&ring, polys).unwrap();
        let point = vec![
            BigRational::from_integer(2.into()),
            BigRational::from_integer(1.into()),
        ];
        let center = Center::at_point(&ring, &[0, 1], point).unwrap();
        assert_eq!(
            order_along_center(&root.ideal[0], &center).unwrap(),
            Order::Finite(2)
        );
        let charts = blow_up(&root, &center, TransformPolicy::Strict, 1).unwrap();
        // chart x: translated total transform x^2 - x^2 y'^2, strict 1 - y'^2
        let cx = &charts[0];
        assert_eq!(
            cx.chart.ideal,
            vec![parse_in_ring(&cx.chart.ring, "1 - y'^2").unwrap()]
        );
        // images: x -> x + 2, y -> x*y' + 1
        assert_eq!(
            cx.chart.images,
            vec![
                parse_in_ring(&cx.chart.ring, "x + 2").unwrap(),
                parse_in_ring(&cx.chart.ring, "x*y' + 1").unwrap(),
            ]
        );
    }

    #[test]
    fn divisor_inheritance_and_drop() {
        let ring = PolyRing::new(FieldSpec::Rational, vec!["x", "y", "z"]).unwrap();
        let root = Chart::root(&ring, vec![]).unwrap();
        let c1 = Center::new(&ring, &[0, 1]).unwrap();
        let first = blow_up(&root, &c1, TransformPolicy::Strict, 1).unwrap();
        // chart x: exceptional = [x]; now blow up (x, z)
        let chart_x = &first[0].chart;
        assert_eq!(chart_x.exceptional_names(), vec!["x"]);
        let c2 = Center::new(&chart_x.ring, &[0, 2]).unwrap();
        let second = blow_up(chart_x, &c2, TransformPolicy::Strict, 2).unwrap();
        // in chart x of the second blow-up, the old divisor {x=0} is replaced
        // by the new exceptional at the same slot
        let xx = &second[0].chart;
        assert_eq!(xx.exceptional.len(), 1);
        assert_eq!(xx.exceptional[0], ExceptionalDivisor { var: 0, birth: 2 });
        // in chart z, the old divisor survives as the primed variable x'
        let xz = &second[1].chart;
        assert_eq!(
            xz.exceptional,
            vec![
                ExceptionalDivisor { var: 0, birth: 1 },
                ExceptionalDivisor { var: 2, birth: 2 },
            ]
        );
        assert_eq!(xz.exceptional_names(), vec!["x'", "z"]);
    }

    #[test]
    fn center_validation() {
        let ring = PolyRing::new(FieldSpec::Rational, vec!["x", "y"]).unwrap();
        assert!(matches!(
            Center::new(&ring, &[0]).unwrap_err(),
            Error::CenterTooSmall
        ));
        assert!(Center::new(&ring, &[0, 5]).is_err());
        assert!(Center::new(&ring, &[0, 0]).is_err());
    }

    #[test]
    fn strict_transform_idempotent() {
        let (ring, polys) =
            parse_polynomials(FieldSpec::Rational, &["x^3*y^2 - x^5"]).unwrap();
        let f = &polys[0];
        let _ = ring;
        let once = strict_transform(f, 0).unwrap();
        let twice = strict_transform(&once, 0).unwrap();
        assert_eq!(once, twice);
        assert_eq!(once.to_string(), "-x^2 + y^2");
    }

    #[test]
    fn describe_sections() {
        let (ring, root) = whitney();
        let center = Center::new(&ring, &[0, 2]).unwrap();
        let charts = blow_up(&root, &center, TransformPolicy::Strict, 1).unwrap();
        let text = charts[1].chart.describe();
        for header in [
            "==== Ambient Space",
            "==== Ideal of Variety:",
            "==== Exceptional Divisors:",
            "==== Images of variables of original ring:",
        ] {
            assert!(text.contains(header), "missing {header} in:\n{text}");
        }
        assert!(text.contains("_[1]=x(1)'^2 - x(2)"));
        assert!(text.contains("_[1]=x(1)'*x(3)"));
    }
}
