use std::fs;
use std::path::PathBuf;

use corset_core::export::{self, csv_text};
use corset_core::qc::{deep_decomposition, CosetRef};
use corset_core::{
    bcp_probe, coset_intersection_bound, delta_estimate, distortion_sandwich_check, distortion_table,
    fineness_probe, induced_peripheral_probe, parse_word, qc3_probe, qc5_profile, saturation,
    superadditive_closure, transition_criterion_check, BcpParams, CayleyBall, ConedBall, ConedVertex,
    CuspedBall, DeltaMethod, DeltaMode, Dominance, Element, Error, GrowthFunction, LeftCoset,
    MarkedGroup, Params, PeripheralStructure, Result, RunSpec, SubgroupEntry, SubgroupSpec,
    WordMetric, DEFAULT_MARGIN,
};

use crate::args::{Cli, Command};
use crate::output::Output;

pub const DEFAULT_BUDGET: usize = 500_000;

fn load(cli: &Cli) -> Result<RunSpec> {
    let mut spec = match &cli.spec {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| Error::Spec(format!("{}: {e}", path.display())))?;
            RunSpec::from_json(&text)?
        }
        None => RunSpec {
            group: None,
            peripherals: Vec::new(),
            subgroups: Vec::new(),
            params: Params::default(),
        },
    };
    spec.params.overlay(&cli.overrides());
    if let Some(list) = &cli.subgroup {
        let entry = SubgroupEntry::from_list(list);
        if entry.generators.is_empty() {
            return Err(Error::Spec("--subgroup needs at least one generator".into()));
        }
        match spec.subgroups.first_mut() {
            Some(first) => *first = entry,
            None => spec.subgroups.push(entry),
        }
    }
    Ok(spec)
}

/// Fills in every default the command will use, so the manifest shows the
/// parameters actually in effect.
fn resolve(command: Command, p: &mut Params) {
    p.budget.get_or_insert(DEFAULT_BUDGET);
    let margin = *p.margin.get_or_insert(DEFAULT_MARGIN);
    use Command::*;
    match command {
        BuildCayley | BuildConed => {
            p.radius.get_or_insert(4);
        }
        BuildCusped => {
            p.radius.get_or_insert(4);
            p.depth.get_or_insert(4);
        }
        Delta => {
            p.radius.get_or_insert(4);
            p.method.get_or_insert_with(|| "thin-triangle".into());
            if p.mode.get_or_insert_with(|| "exhaustive".into()) == "sampled" {
                p.samples.get_or_insert(10_000);
                p.seed.get_or_insert(0);
            }
        }
        Bcp => {
            p.lambda.get_or_insert(1.0);
            p.l.get_or_insert_with(|| vec![4, 5, 6, 7, 8]);
            p.seed.get_or_insert(0);
            p.pair_threshold.get_or_insert(1_000_000);
            p.path_cap.get_or_insert(100_000);
        }
        Fineness => {
            p.radius.get_or_insert(4);
            if p.ns.is_none() {
                p.n.get_or_insert(3);
            }
            p.word.get_or_insert_with(|| "1".into());
            if p.letter.is_none() {
                p.peripheral.get_or_insert(0);
            }
            p.path_cap.get_or_insert(10_000_000);
        }
        Qc5 | TransitionQc | Induced => {
            let n = *p.nmax.get_or_insert(6);
            p.radius.get_or_insert(n + margin);
            if command == TransitionQc {
                p.epsilon.get_or_insert(1);
            }
        }
        Qc3 => {
            let ns = p.ns.get_or_insert_with(|| vec![1, 2, 3, 4]);
            let n = ns.iter().copied().max().unwrap_or(0);
            p.radius.get_or_insert(n + margin);
            p.depth.get_or_insert(4);
        }
        Saturation => {
            p.m.get_or_insert(2);
            p.epsilon.get_or_insert(1);
            p.r.get_or_insert(1);
        }
        CloseCosets => {
            p.l.get_or_insert_with(|| vec![1]);
            p.nmax.get_or_insert(5);
        }
        Distortion => {
            p.big_n.get_or_insert(8);
        }
        Closure => {
            p.big_n.get_or_insert(12);
            if p.f.is_none() && p.function.get_or_insert_with(|| "square".into()) == "random" {
                p.seed.get_or_insert(0);
            }
        }
        Sandwich => {
            // the induced probe runs over the whole ball, so no margin here
            let n = *p.big_n.get_or_insert(6);
            p.c_max.get_or_insert(4);
            p.radius.get_or_insert(n);
        }
    }
}

fn get<T: Clone>(v: &Option<T>, name: &str) -> Result<T> {
    Params::require(v, name)
}

fn needs_group(command: Command) -> bool {
    command != Command::Closure
}

pub fn run(cli: &Cli) -> Result<Vec<PathBuf>> {
    let mut spec = load(cli)?;
    resolve(cli.command, &mut spec.params);
    spec.params.validate()?;
    let group = if needs_group(cli.command) {
        spec.build_group()?
    } else {
        MarkedGroup::free(1)
    };
    let peripherals = spec.build_peripherals(&group)?;
    let subgroups = spec.build_subgroups(&group)?;
    let p = spec.params.clone();
    let budget = get(&p.budget, "budget")?;
    let mut out = Output::new(&cli.out, cli.command.name(), spec, budget)?;
    let ctx = Ctx {
        group: &group,
        peripherals: &peripherals,
        subgroups: &subgroups,
        p: &p,
        budget,
        margin: get(&p.margin, "margin")?,
    };
    use Command::*;
    match cli.command {
        BuildCayley => ctx.build_cayley(&mut out)?,
        BuildConed => ctx.build_coned(&mut out)?,
        BuildCusped => ctx.build_cusped(&mut out)?,
        Delta => ctx.delta(&mut out)?,
        Bcp => ctx.bcp(&mut out)?,
        Fineness => ctx.fineness(&mut out)?,
        Qc5 => ctx.qc(&mut out, false)?,
        TransitionQc => ctx.qc(&mut out, true)?,
        Qc3 => ctx.qc3(&mut out)?,
        Saturation => ctx.saturation(&mut out)?,
        Induced => ctx.induced(&mut out)?,
        CloseCosets => ctx.close_cosets(&mut out)?,
        Distortion => ctx.distortion(&mut out)?,
        Closure => ctx.closure(&mut out)?,
        Sandwich => ctx.sandwich(&mut out)?,
    }
    out.finish()
}

struct Ctx<'a> {
    group: &'a MarkedGroup,
    peripherals: &'a PeripheralStructure,
    subgroups: &'a [(SubgroupSpec, Element)],
    p: &'a Params,
    budget: usize,
    margin: usize,
}

fn joined<T: ToString>(xs: &[T], sep: &str) -> String {
    xs.iter().map(T::to_string).collect::<Vec<_>>().join(sep)
}

fn dominance_c(d: &Dominance) -> String {
    d.c.map_or_else(|| "none".into(), |c| c.to_string())
}

impl Ctx<'_> {
    fn subgroup(&self, i: usize) -> Result<&SubgroupSpec> {
        self.subgroups
            .get(i)
            .map(|s| &s.0)
            .ok_or_else(|| Error::Spec(format!("command needs subgroup #{}", i + 1)))
    }

    fn need_peripherals(&self) -> Result<()> {
        if self.peripherals.is_empty() {
            return Err(Error::Spec("command needs a peripheral structure".into()));
        }
        Ok(())
    }

    fn coned(&self) -> Result<ConedBall> {
        let radius = get(&self.p.radius, "radius")?;
        Ok(ConedBall::build(self.group, self.peripherals, radius, self.budget)?.with_margin(self.margin))
    }

    fn cusped(&self) -> Result<CuspedBall> {
        self.need_peripherals()?;
        let radius = get(&self.p.radius, "radius")?;
        let depth = get(&self.p.depth, "depth")?;
        Ok(CuspedBall::build(self.group, self.peripherals, radius, depth, self.budget)?.with_margin(self.margin))
    }

    fn element(&self, word: &str) -> Result<Element> {
        Ok(self.group.eval(&parse_word(word, self.group.names())?))
    }

    fn build_cayley(&self, out: &mut Output) -> Result<()> {
        let ball = CayleyBall::build(self.group, get(&self.p.radius, "radius")?, self.budget)?;
        out.result("vertices", ball.len());
        out.result("edges", ball.graph().edge_count());
        let m = out.manifest();
        out.write("cayley.csv", &export::cayley_csv(&ball, &m)?)?;
        out.write("cayley.dot", &export::cayley_dot(&ball, &m))?;
        out.write("cayley.graphml", &export::cayley_graphml(&ball, &m))
    }

    fn build_coned(&self, out: &mut Output) -> Result<()> {
        let coned = self.coned()?;
        let graph = coned.graph();
        out.result("group_vertices", coned.group_vertex_count());
        out.result("cone_vertices", coned.cone_count());
        out.result("edges", graph.edge_count());
        let rows: Vec<Vec<String>> = (0..graph.vertex_count())
            .map(|id| match coned.vertex(id) {
                ConedVertex::Group(i) => vec![
                    id.to_string(),
                    "group".into(),
                    self.group.render(coned.cayley().element(i)),
                    coned.cayley().length(i).to_string(),
                ],
                ConedVertex::Cone(c) => vec![id.to_string(), "cone".into(), coned.coset_label(c), String::new()],
            })
            .collect();
        let m = out.manifest();
        out.write("coned.csv", &csv_text(&m, &["id", "kind", "label", "length"], &rows)?)?;
        out.write("coned.dot", &export::coned_dot(&coned, &m))
    }

    fn build_cusped(&self, out: &mut Output) -> Result<()> {
        let cusped = self.cusped()?;
        out.result("vertices", cusped.vertex_count());
        out.result("horoballs", cusped.horoball_count());
        out.result("edges", cusped.graph().edge_count());
        let m = out.manifest();
        out.write("cusped.csv", &export::cusped_csv(&cusped, &m)?)?;
        out.write("cusped.dot", &export::cusped_dot(&cusped, &m))
    }

    fn delta(&self, out: &mut Output) -> Result<()> {
        let p = self.p;
        let space = p
            .space
            .clone()
            .unwrap_or_else(|| if self.peripherals.is_empty() { "cayley" } else { "cusped" }.into());
        let radius = get(&p.radius, "radius")?;
        let (graph, depth) = match space.as_str() {
            "cayley" => (CayleyBall::build(self.group, radius, self.budget)?.graph(), String::new()),
            "cusped" => {
                let x = self.cusped()?;
                (x.graph().clone(), x.depth().to_string())
            }
            other => {
                return Err(Error::Spec(format!(
                    "delta runs on the cayley or cusped space, not {other}"
                )))
            }
        };
        let method = match get(&p.method, "method")?.as_str() {
            "four-point" => DeltaMethod::FourPoint,
            _ => DeltaMethod::ThinTriangle,
        };
        let mode = match get(&p.mode, "mode")?.as_str() {
            "sampled" => DeltaMode::Sampled {
                size: get(&p.samples, "samples")?,
                seed: get(&p.seed, "seed")?,
            },
            _ => DeltaMode::Exhaustive,
        };
        let est = delta_estimate(&graph, method, mode)?;
        out.result("delta", est.value);
        let row = vec![
            space,
            radius.to_string(),
            depth,
            get(&p.method, "method")?,
            get(&p.mode, "mode")?,
            est.examined.to_string(),
            est.exhaustive.to_string(),
            est.value.to_string(),
        ];
        let m = out.manifest();
        let header = ["space", "radius", "depth", "method", "mode", "examined", "exhaustive", "delta"];
        out.write("delta.csv", &csv_text(&m, &header, &[row])?)
    }

    fn bcp(&self, out: &mut Output) -> Result<()> {
        self.need_peripherals()?;
        let p = self.p;
        let params = BcpParams {
            lambda: get(&p.lambda, "lambda")?,
            l_values: get(&p.l, "L")?,
            seed: get(&p.seed, "seed")?,
            pair_threshold: usize::try_from(get(&p.pair_threshold, "pair_threshold")?).unwrap_or(usize::MAX),
            path_cap: get(&p.path_cap, "path_cap")?,
        };
        let report = bcp_probe(self.group, self.peripherals, &params, self.margin, self.budget)?;
        out.result("radius", report.radius);
        let levels: Vec<Vec<String>> = report
            .levels
            .iter()
            .map(|l| {
                vec![
                    l.l.to_string(),
                    l.pairs.to_string(),
                    l.sampled.to_string(),
                    l.clause1.to_string(),
                    l.clause2.to_string(),
                ]
            })
            .collect();
        let cosets: Vec<Vec<String>> = report
            .levels
            .iter()
            .flat_map(|l| {
                l.per_coset.iter().map(move |(&(clause, c), &a)| {
                    vec![l.l.to_string(), clause.to_string(), c.0.to_string(), a.to_string()]
                })
            })
            .collect();
        let m = out.manifest();
        out.write(
            "bcp.csv",
            &csv_text(&m, &["L", "pairs", "sampled", "clause1", "clause2"], &levels)?,
        )?;
        out.write(
            "bcp_cosets.csv",
            &csv_text(&m, &["L", "clause", "coset", "discrepancy"], &cosets)?,
        )
    }

    fn fineness(&self, out: &mut Output) -> Result<()> {
        self.need_peripherals()?;
        let p = self.p;
        let coned = self.coned()?;
        let word = get(&p.word, "word")?;
        let g = self.element(&word)?;
        let i = coned.index_with_margin(&g)?;
        let (v, edge) = match &p.letter {
            Some(letter) => {
                let w = parse_word(letter, self.group.names())?;
                let [l] = w.letters() else {
                    return Err(Error::Spec(format!("letter {letter} is not a single generator")));
                };
                let j = coned.cayley().step(i, *l).ok_or_else(|| {
                    Error::InsufficientRadius(format!("{word}·{letter} leaves the ball"))
                })?;
                (ConedVertex::Group(j), format!("{word} -> {word} {letter}"))
            }
            None => {
                let k = get(&p.peripheral, "peripheral")?;
                if k >= self.peripherals.len() {
                    return Err(Error::Spec(format!("no peripheral #{k}")));
                }
                let c = coned.coset_of(i, k);
                (ConedVertex::Cone(c), format!("{word} -> cone({})", coned.coset_label(c)))
            }
        };
        let ns = p.ns.clone().unwrap_or_else(|| vec![p.n.unwrap_or(3)]);
        let cap = get(&p.path_cap, "path_cap")?;
        let mut rows = Vec::new();
        for n in ns {
            let count = fineness_probe(&coned, ConedVertex::Group(i), v, n, cap)?;
            rows.push(vec![coned.radius().to_string(), n.to_string(), edge.clone(), count.to_string()]);
        }
        let m = out.manifest();
        out.write("fineness.csv", &csv_text(&m, &["radius", "n", "edge", "count"], &rows)?)
    }

    fn metric(&self) -> Result<WordMetric> {
        match &self.p.weights {
            Some(w) if w.len() != self.group.rank() => Err(Error::Spec(format!(
                "{} weights for {} generators",
                w.len(),
                self.group.rank()
            ))),
            Some(w) => WordMetric::weighted(w.clone()),
            None => Ok(WordMetric::standard(self.group.rank())),
        }
    }

    fn qc(&self, out: &mut Output, transition: bool) -> Result<()> {
        let p = self.p;
        let h = self.subgroup(0)?;
        let metric = self.metric()?;
        let n_max = get(&p.nmax, "nmax")?;
        let coned = self.coned()?;
        let report = if transition {
            transition_criterion_check(&coned, h, &metric, get(&p.epsilon, "epsilon")?, p.r, n_max)?
        } else {
            qc5_profile(&coned, h, &metric, n_max)?
        };
        out.result("subgroup", &report.subgroup);
        out.result("metric", &report.metric);
        for (k, v) in &report.parameters {
            out.result(k, v);
        }
        out.result("window", report.window);
        out.result("verdict", report.verdict);
        let m = out.manifest();
        let rows: Vec<Vec<String>> = report
            .rows
            .iter()
            .map(|r| {
                let mut row = vec![r.n.to_string(), r.kappa.to_string(), r.pairs.to_string()];
                if transition {
                    row.push(r.hausdorff.map_or_else(String::new, |d| d.to_string()));
                }
                row
            })
            .collect();
        if transition {
            out.write(
                "transition.csv",
                &csv_text(&m, &["n", "kappa_prime", "pairs", "hausdorff"], &rows)?,
            )
        } else {
            out.write("qc5.csv", &csv_text(&m, &["n", "kappa", "pairs"], &rows)?)
        }
    }

    fn qc3(&self, out: &mut Output) -> Result<()> {
        let h = self.subgroup(0)?;
        let ns = get(&self.p.ns, "ns")?;
        let x = self.cusped()?;
        let mu = qc3_probe(&x, h, &ns)?;
        out.result("subgroup", h.name());
        let rows: Vec<Vec<String>> = mu
            .iter()
            .map(|&(n, v)| vec![n.to_string(), x.radius().to_string(), x.depth().to_string(), v.to_string()])
            .collect();
        let m = out.manifest();
        out.write("qc3.csv", &csv_text(&m, &["n", "radius", "depth", "mu"], &rows)?)
    }

    fn saturation(&self, out: &mut Output) -> Result<()> {
        self.need_peripherals()?;
        let p = self.p;
        let word = get(&p.word, "word")?;
        let m_thr = get(&p.m, "M")?;
        let g = self.element(&word)?;
        let upper = parse_word(&word, self.group.names())?.len();
        let radius = p.radius.unwrap_or(upper + m_thr);
        let coned = ConedBall::build(self.group, self.peripherals, radius, self.budget)?.with_margin(self.margin);
        let path = coned.cayley().geodesic(&self.group.identity(), &g)?.vertices;
        let sat = saturation(&coned, &path, m_thr)?;
        let deep = deep_decomposition(
            self.group,
            self.peripherals,
            &path,
            get(&p.epsilon, "epsilon")?,
            get(&p.r, "R")?,
        )?;
        out.result("path", self.group.render(&g));
        out.result("cosets", sat.cosets.len());
        out.result("transition_points", deep.transition_points().len());
        let cosets: Vec<Vec<String>> = sat
            .cosets
            .iter()
            .map(|&c| {
                let e = coned.cosets().entry(c);
                vec![
                    c.0.to_string(),
                    e.peripheral.to_string(),
                    self.group.render(&e.representative),
                    coned.coset_label(c),
                ]
            })
            .collect();
        let owner = |o: Option<&CosetRef>| match o {
            Some(r) => (r.peripheral.to_string(), self.group.render(&r.key)),
            None => (String::new(), String::new()),
        };
        let vertices: Vec<Vec<String>> = path
            .iter()
            .zip(deep.owners())
            .enumerate()
            .map(|(i, (v, o))| {
                let (per, key) = owner(o);
                vec![i.to_string(), self.group.render(v), per, key]
            })
            .collect();
        let m = out.manifest();
        out.write(
            "saturation.csv",
            &csv_text(&m, &["coset", "peripheral", "representative", "label"], &cosets)?,
        )?;
        out.write(
            "path.csv",
            &csv_text(&m, &["index", "vertex", "deep_peripheral", "deep_coset_key"], &vertices)?,
        )
    }

    fn induced(&self, out: &mut Output) -> Result<()> {
        self.need_peripherals()?;
        let h = self.subgroup(0)?;
        let coned = self.coned()?;
        let report = induced_peripheral_probe(&coned, h, get(&self.p.nmax, "nmax")?)?;
        out.result("subgroup", &report.subgroup);
        out.result("strong", report.strong);
        let rows: Vec<Vec<String>> = report
            .entries
            .iter()
            .map(|e| {
                let gens: Vec<String> = e.generators.iter().map(|g| self.group.render(g)).collect();
                vec![
                    coned.coset_label(e.coset),
                    e.peripheral.to_string(),
                    self.group.render(&e.representative),
                    e.class.to_string(),
                    gens.join(";"),
                    joined(&e.counts, " "),
                ]
            })
            .collect();
        let m = out.manifest();
        let header = ["coset", "peripheral", "representative", "class", "generators", "counts"];
        out.write("induced.csv", &csv_text(&m, &header, &rows)?)
    }

    fn close_cosets(&self, out: &mut Output) -> Result<()> {
        let p = self.p;
        if self.subgroups.len() < 2 {
            return Err(Error::Spec("close-cosets needs two subgroups".into()));
        }
        let xh = LeftCoset {
            x: self.subgroups[0].1.clone(),
            subgroup: &self.subgroups[0].0,
        };
        let yk = LeftCoset {
            x: self.subgroups[1].1.clone(),
            subgroup: &self.subgroups[1].0,
        };
        let ls = get(&p.l, "L")?;
        let &[l] = ls.as_slice() else {
            return Err(Error::Spec("close-cosets takes a single L".into()));
        };
        let report = coset_intersection_bound(self.group, &xh, &yk, l, get(&p.nmax, "nmax")?, self.budget)?;
        out.result("l_prime", report.l_prime());
        out.result("stable", report.stable);
        let rows: Vec<Vec<String>> = report
            .rows
            .iter()
            .map(|r| {
                vec![
                    r.n.to_string(),
                    r.region.len().to_string(),
                    r.target.to_string(),
                    r.l_prime.to_string(),
                ]
            })
            .collect();
        let m = out.manifest();
        out.write(
            "close_cosets.csv",
            &csv_text(&m, &["nmax", "region", "target", "l_prime"], &rows)?,
        )
    }

    fn distortion(&self, out: &mut Output) -> Result<()> {
        let h = self.subgroup(0)?;
        let table = distortion_table(self.group, h, get(&self.p.big_n, "N")?, self.budget)?;
        out.result("subgroup", &table.subgroup);
        out.result("members", table.members);
        let rows: Vec<Vec<String>> = table
            .values
            .iter()
            .enumerate()
            .map(|(n, v)| vec![n.to_string(), v.to_string()])
            .collect();
        let m = out.manifest();
        out.write("distortion.csv", &csv_text(&m, &["n", "delta"], &rows)?)
    }

    fn closure(&self, out: &mut Output) -> Result<()> {
        let p = self.p;
        let f = match &p.f {
            Some(values) => {
                if values.first().is_some_and(|&v| v != 0) {
                    return Err(Error::Domain("f(0) must be 0".into()));
                }
                GrowthFunction::new(values.clone(), corset_core::Provenance::Synthetic)
            }
            None => {
                let n = get(&p.big_n, "N")?;
                match get(&p.function, "function")?.as_str() {
                    "square" => GrowthFunction::synthetic(n, |x| x * x),
                    "sqrt" => GrowthFunction::synthetic(n, |x| (x as f64).sqrt().ceil() as u64),
                    "one" => GrowthFunction::synthetic(n, |x| u64::from(x > 0)),
                    _ => GrowthFunction::random_monotone(n, 3, get(&p.seed, "seed")?),
                }
            }
        };
        let f_bar = superadditive_closure(&f);
        out.result("superadditive_input", f.is_superadditive());
        let rows: Vec<Vec<String>> = (0..=f.n())
            .map(|n| vec![n.to_string(), f.get(n).to_string(), f_bar.get(n).to_string()])
            .collect();
        let m = out.manifest();
        out.write("closure.csv", &csv_text(&m, &["n", "f", "f_bar"], &rows)?)
    }

    fn sandwich(&self, out: &mut Output) -> Result<()> {
        self.need_peripherals()?;
        let p = self.p;
        let h = self.subgroup(0)?;
        let n = get(&p.big_n, "N")?;
        let coned = self.coned()?;
        let report = distortion_sandwich_check(&coned, h, n, get(&p.c_max, "C_max")?, self.budget)?;
        out.result("lower_C", dominance_c(&report.lower));
        out.result("upper_C", dominance_c(&report.upper));
        out.result("C", report.c().map_or_else(|| "none".into(), |c| c.to_string()));
        out.result("holds", report.holds());
        out.result("lower_clipped", report.lower.clipped);
        let rows: Vec<Vec<String>> = (0..=n)
            .map(|k| {
                vec![
                    k.to_string(),
                    report.f.get(k).to_string(),
                    report.f_bar.get(k).to_string(),
                    report.delta.values[k].to_string(),
                ]
            })
            .collect();
        let long: Vec<Vec<String>> = (0..=report.f.n())
            .map(|k| vec![k.to_string(), report.f.get(k).to_string(), report.f_bar.get(k).to_string()])
            .collect();
        let induced: Vec<Vec<String>> = report
            .induced
            .iter()
            .map(|o| {
                let gens: Vec<String> = o.generators.iter().map(|g| self.group.render(g)).collect();
                vec![
                    o.peripheral.to_string(),
                    self.group.render(&o.conjugator),
                    gens.join(";"),
                ]
            })
            .collect();
        let m = out.manifest();
        out.write("sandwich.csv", &csv_text(&m, &["n", "f", "f_bar", "delta"], &rows)?)?;
        out.write("sandwich_f.csv", &csv_text(&m, &["n", "f", "f_bar"], &long)?)?;
        out.write(
            "sandwich_induced.csv",
            &csv_text(&m, &["peripheral", "conjugator", "generators"], &induced)?,
        )
    }
}
