//! Table and figure-data renderers. Each takes computed results and returns
//! file contents; nothing here touches the filesystem.

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::json;

use super::format::{align, eur_m, eur_m_short, fixed, thousands};
use super::OutputFormat;
use crate::counterfactual::{gain_panel, loss_panel, BestXIResult};
use crate::estimators::{stars, FitResult};
use crate::flowledger::{AggregateStats, BilateralFlow, CountrySummary};
use crate::gravity::{ColonyLoss, ColoniserRow, GravityResults};
use crate::ingest::IngestReport;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Artifact {
    pub file: String,
    pub contents: String,
}

impl Artifact {
    fn new(stem: &str, format: OutputFormat, contents: String) -> Self {
        Artifact { file: format!("{stem}.{}", format.extension()), contents }
    }
}

fn to_json<T: Serialize + ?Sized>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("results serialise");
    s.push('\n');
    s
}

fn to_csv(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for r in rows {
        w.write_record(&r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 input")
}

fn pct(v: Option<f64>) -> String {
    fixed(v.map(|x| 100.0 * x), 1)
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

pub fn stats(agg: &AggregateStats, ingest: &IngestReport, format: OutputFormat) -> Artifact {
    let contents = match format {
        OutputFormat::Json => to_json(&json!({ "aggregates": agg, "ingest": ingest })),
        OutputFormat::Csv => to_csv(
            &["metric", "value"],
            [
                ("total_players", agg.total_players.to_string()),
                ("dual_players", agg.dual_players.to_string()),
                ("dual_share", opt(agg.dual_share)),
                ("total_value_eur", agg.total_value.to_string()),
                ("dual_value_eur", agg.dual_value.to_string()),
                ("dual_value_share", opt(agg.dual_value_share)),
                ("countries", agg.country_count.to_string()),
                ("skipped_rows", ingest.skipped.len().to_string()),
                ("unmatched_country_names", ingest.unmatched_countries.len().to_string()),
            ]
            .into_iter()
            .map(|(k, v)| vec![k.to_owned(), v]),
        ),
        OutputFormat::Text => {
            let mut rows = vec![
                vec!["Players".into(), thousands(agg.total_players as i64)],
                vec!["Dual citizens".into(), thousands(agg.dual_players as i64), format!("({}%)", pct(agg.dual_share))],
                vec!["Total value (€m)".into(), eur_m(agg.total_value as i64)],
                vec!["Dual value (€m)".into(), eur_m(agg.dual_value as i64), format!("({}%)", pct(agg.dual_value_share))],
                vec!["Countries".into(), thousands(agg.country_count as i64)],
                vec!["Rows read".into(), thousands(ingest.total_rows as i64)],
                vec!["Rows skipped".into(), thousands(ingest.skipped.len() as i64)],
                vec!["Missing market values".into(), thousands(ingest.missing_market_values as i64)],
            ];
            if !ingest.unmatched_countries.is_empty() {
                let names: Vec<String> =
                    ingest.unmatched_countries.iter().map(|(n, c)| format!("{n} ({c})")).collect();
                rows.push(vec!["Unmatched countries".into(), names.join(", ")]);
            }
            align(&rows)
        }
    };
    Artifact::new("stats", format, contents)
}

/// The four ranking panels of the aggregate-flow table.
#[derive(Debug, Clone, Serialize)]
pub struct FlowPanels<'a> {
    pub value_lost: Vec<&'a CountrySummary>,
    pub value_gained: Vec<&'a CountrySummary>,
    pub largest_losers: Vec<&'a CountrySummary>,
    pub largest_gainers: Vec<&'a CountrySummary>,
}

pub fn flow_panels(summaries: &[CountrySummary], k: usize) -> FlowPanels<'_> {
    let ranked = |key: &dyn Fn(&CountrySummary) -> i64, keep: &dyn Fn(&CountrySummary) -> bool| {
        let mut v: Vec<&CountrySummary> = summaries.iter().filter(|s| keep(s)).collect();
        v.sort_by(|a, b| key(b).cmp(&key(a)).then_with(|| a.country.stats_code.cmp(&b.country.stats_code)));
        v.truncate(k);
        v
    };
    FlowPanels {
        value_lost: ranked(&|s| s.gross_lost as i64, &|s| s.gross_lost > 0),
        value_gained: ranked(&|s| s.gross_gained as i64, &|s| s.gross_gained > 0),
        largest_losers: ranked(&|s| -s.net, &|s| s.net < 0),
        largest_gainers: ranked(&|s| s.net, &|s| s.net > 0),
    }
}

pub fn flows(summaries: &[CountrySummary], k: usize, format: OutputFormat) -> Artifact {
    let panels = flow_panels(summaries, k);
    let contents = match format {
        OutputFormat::Json => to_json(&json!({ "panels": panels, "countries": summaries })),
        OutputFormat::Csv => to_csv(
            &[
                "country",
                "stats_code",
                "wdi_code",
                "gross_lost_eur",
                "gross_gained_eur",
                "net_eur",
                "players_lost",
                "players_gained",
                "net_over_gdp",
                "net_per_capita",
            ],
            summaries.iter().map(|s| {
                vec![
                    s.country.display_name.clone(),
                    s.country.stats_code.clone(),
                    s.country.wdi_code.clone().unwrap_or_default(),
                    s.gross_lost.to_string(),
                    s.gross_gained.to_string(),
                    s.net.to_string(),
                    s.players_lost.to_string(),
                    s.players_gained.to_string(),
                    opt(s.net_over_gdp),
                    opt(s.net_per_capita),
                ]
            }),
        ),
        OutputFormat::Text => {
            let header = |a: &str, b: &str| vec![a.to_owned(), "€m".to_owned(), b.to_owned(), "€m".to_owned()];
            let side = |v: &[&CountrySummary], i: usize, f: &dyn Fn(&CountrySummary) -> i64| {
                v.get(i).map(|s| [s.country.display_name.clone(), eur_m(f(s))]).unwrap_or_default()
            };
            let mut out = String::from("Panel A: Gross flows\n");
            let mut rows = vec![header("Value lost", "Value gained")];
            for i in 0..panels.value_lost.len().max(panels.value_gained.len()) {
                let mut r = side(&panels.value_lost, i, &|s| s.gross_lost as i64).to_vec();
                r.extend(side(&panels.value_gained, i, &|s| s.gross_gained as i64));
                rows.push(r);
            }
            out.push_str(&align(&rows));
            out.push_str("\nPanel B: Net flows\n");
            let mut rows = vec![header("Largest losers", "Largest gainers")];
            for i in 0..panels.largest_losers.len().max(panels.largest_gainers.len()) {
                let mut r = side(&panels.largest_losers, i, &|s| s.net).to_vec();
                r.extend(side(&panels.largest_gainers, i, &|s| s.net));
                rows.push(r);
            }
            out.push_str(&align(&rows));
            out
        }
    };
    Artifact::new("flows", format, contents)
}

/// Corridors by value descending; ties broken by origin then destination code.
pub fn top_corridors(flows: &[BilateralFlow], k: usize) -> Vec<&BilateralFlow> {
    let mut v: Vec<&BilateralFlow> = flows.iter().collect();
    v.sort_by(|a, b| {
        b.total_value
            .cmp(&a.total_value)
            .then_with(|| a.origin.stats_code.cmp(&b.origin.stats_code))
            .then_with(|| a.destination.stats_code.cmp(&b.destination.stats_code))
    });
    v.truncate(k);
    v
}

/// Delimited corridor dump: origin, destination, players, value_eur.
pub fn corridor_dump<'a>(flows: impl IntoIterator<Item = &'a BilateralFlow>) -> String {
    to_csv(
        &["origin", "destination", "players", "value_eur"],
        flows.into_iter().map(|f| {
            vec![
                f.origin.display_name.clone(),
                f.destination.display_name.clone(),
                f.player_count.to_string(),
                f.total_value.to_string(),
            ]
        }),
    )
}

pub fn corridors(flows: &[BilateralFlow], k: usize, format: OutputFormat) -> Artifact {
    let top = top_corridors(flows, k);
    let contents = match format {
        OutputFormat::Csv => corridor_dump(top),
        OutputFormat::Json => to_json(&top),
        OutputFormat::Text => {
            let mut rows = vec![vec!["Origin".into(), "Destination".into(), "Players".into(), "€m".into()]];
            rows.extend(top.iter().map(|f| {
                vec![
                    f.origin.display_name.clone(),
                    f.destination.display_name.clone(),
                    thousands(f.player_count as i64),
                    eur_m(f.total_value as i64),
                ]
            }));
            align(&rows)
        }
    };
    Artifact::new("corridors", format, contents)
}

fn top_player_label(r: &BestXIResult) -> String {
    r.top_player
        .as_ref()
        .map(|p| format!("{} ({}) ({})", p.name, p.player_id, eur_m_short(p.value)))
        .unwrap_or_default()
}

pub fn bestxi(results: &[BestXIResult], k: usize, format: OutputFormat) -> Artifact {
    let gains = gain_panel(results, k);
    let losses = loss_panel(results, k);
    let contents = match format {
        OutputFormat::Json => to_json(&json!({ "gains": gains, "losses": losses, "countries": results })),
        OutputFormat::Csv => to_csv(
            &[
                "country",
                "stats_code",
                "actual_eur",
                "counterfactual_eur",
                "diff_eur",
                "pct_change",
                "pct_of_gdp",
                "top_player",
                "top_player_id",
                "top_player_value_eur",
            ],
            results.iter().map(|r| {
                let tp = r.top_player.as_ref();
                vec![
                    r.country.display_name.clone(),
                    r.country.stats_code.clone(),
                    r.actual_value.to_string(),
                    r.counterfactual_value.to_string(),
                    r.diff.to_string(),
                    opt(r.pct_change),
                    opt(r.pct_of_gdp),
                    tp.map(|p| p.name.clone()).unwrap_or_default(),
                    tp.map(|p| p.player_id.to_string()).unwrap_or_default(),
                    tp.map(|p| p.value.to_string()).unwrap_or_default(),
                ]
            }),
        ),
        OutputFormat::Text => {
            let mut rows = vec![["Country", "Actual (€m)", "CF (€m)", "Diff. (€m)", "Change (%)", "% of GDP", "Top player"]
                .map(String::from)
                .to_vec()];
            for (title, panel) in [
                ("Panel A: Countries that gain from leg drain", &gains),
                ("Panel B: Countries that lose from leg drain", &losses),
            ] {
                rows.push(vec![title.to_owned()]);
                rows.extend(panel.iter().map(|r| {
                    vec![
                        format!("  {}", r.country.display_name),
                        eur_m(r.actual_value as i64),
                        eur_m(r.counterfactual_value as i64),
                        eur_m(r.diff),
                        fixed(r.pct_change, 1),
                        fixed(r.pct_of_gdp, 4),
                        top_player_label(r),
                    ]
                }));
            }
            // panel titles span the row; keep them out of the width computation
            let body = align(&rows.iter().map(|r| if r.len() == 1 { vec![String::new()] } else { r.clone() }).collect::<Vec<_>>());
            body.lines()
                .zip(&rows)
                .map(|(line, r)| if r.len() == 1 { format!("{}\n", r[0]) } else { format!("{line}\n") })
                .collect()
        }
    };
    Artifact::new("bestxi", format, contents)
}

#[derive(Serialize)]
struct CoefficientJson<'a> {
    name: &'a str,
    coefficient: f64,
    standard_error: f64,
    p_value: f64,
    stars: &'static str,
}

fn coefficients(fit: &FitResult) -> Vec<CoefficientJson<'_>> {
    fit.names
        .iter()
        .enumerate()
        .filter(|(_, n)| !n.starts_with("FE["))
        .map(|(i, name)| {
            let p = fit.p_value(name).unwrap_or(f64::NAN);
            CoefficientJson {
                name,
                coefficient: fit.coefficients[i],
                standard_error: fit.standard_errors[i],
                p_value: p,
                stars: stars(p),
            }
        })
        .collect()
}

pub fn gravity(results: &GravityResults, excluded: usize, format: OutputFormat) -> Artifact {
    let contents = match format {
        OutputFormat::Json => {
            let columns: Vec<_> = results
                .columns
                .iter()
                .zip(&results.table.columns)
                .map(|(c, t)| {
                    json!({
                        "label": t.label,
                        "estimator": t.estimator,
                        "destination_fe": t.destination_fe,
                        "observations": c.fit.n_obs,
                        "fixed_effects": c.fit.names.iter().filter(|n| n.starts_with("FE[")).count(),
                        "dropped_groups": c.dropped_groups,
                        "coefficients": coefficients(&c.fit),
                        "diagnostics": c.fit.diagnostics(),
                    })
                })
                .collect();
            to_json(&json!({ "columns": columns, "excluded_corridors": excluded }))
        }
        OutputFormat::Csv => to_csv(
            &["column", "estimator", "destination_fe", "term", "coefficient", "standard_error", "p_value", "stars", "observations"],
            results.columns.iter().zip(&results.table.columns).flat_map(|(c, t)| {
                coefficients(&c.fit)
                    .into_iter()
                    .map(|k| {
                        vec![
                            t.label.clone(),
                            t.estimator.to_owned(),
                            t.destination_fe.to_string(),
                            k.name.to_owned(),
                            k.coefficient.to_string(),
                            k.standard_error.to_string(),
                            k.p_value.to_string(),
                            k.stars.to_owned(),
                            c.fit.n_obs.to_string(),
                        ]
                    })
                    .collect::<Vec<_>>()
            }),
        ),
        OutputFormat::Text => {
            let mut s = results.table.to_text();
            s.push_str("\nTwo-way clustered standard errors (origin, destination) in parentheses.\n");
            s.push_str("* p<0.10, ** p<0.05, *** p<0.01\n");
            s
        }
    };
    Artifact::new("gravity", format, contents)
}

pub fn colonial(rows: &[ColoniserRow], format: OutputFormat) -> Artifact {
    let contents = match format {
        OutputFormat::Json => to_json(rows),
        OutputFormat::Csv => to_csv(
            &["coloniser", "colonies", "players", "total_gained_eur", "colonial_value_eur", "share"],
            rows.iter().map(|r| {
                vec![
                    r.coloniser.display_name.clone(),
                    r.colonies.to_string(),
                    r.players.to_string(),
                    r.total_gained.to_string(),
                    r.colonial_value.to_string(),
                    r.share.to_string(),
                ]
            }),
        ),
        OutputFormat::Text => {
            let mut t = vec![["Coloniser", "Colonies", "Players", "Total gained (€m)", "From colonies (€m)", "Share (%)"]
                .map(String::from)
                .to_vec()];
            t.extend(rows.iter().map(|r| {
                vec![
                    r.coloniser.display_name.clone(),
                    r.colonies.to_string(),
                    thousands(r.players as i64),
                    eur_m(r.total_gained as i64),
                    eur_m(r.colonial_value as i64),
                    format!("{:.1}", 100.0 * r.share),
                ]
            }));
            align(&t)
        }
    };
    Artifact::new("colonial", format, contents)
}

/// Net value per map code. Sub-national teams fold into their sovereign
/// state so each map region appears once.
pub fn net_by_map_code(summaries: &[CountrySummary]) -> BTreeMap<String, i64> {
    let mut out = BTreeMap::new();
    for s in summaries {
        *out.entry(s.country.sovereign_code().to_owned()).or_insert(0) += s.net;
    }
    out
}

pub fn mapdata(summaries: &[CountrySummary], losses: &[ColonyLoss], format: OutputFormat) -> Vec<Artifact> {
    let net = net_by_map_code(summaries);
    match format {
        OutputFormat::Json => {
            let colonies: Vec<_> = losses
                .iter()
                .map(|l| {
                    json!({
                        "colony": l.colony.display_name,
                        "code": l.colony.sovereign_code(),
                        "coloniser": l.coloniser.display_name,
                        "players": l.players,
                        "value_lost_eur": l.value_lost,
                    })
                })
                .collect();
            vec![Artifact::new("mapdata", format, to_json(&json!({ "net_value_eur": net, "colony_losses": colonies })))]
        }
        _ => {
            let net_csv = to_csv(&["code", "net_value_eur"], net.iter().map(|(k, v)| vec![k.clone(), v.to_string()]));
            let losses_csv = to_csv(
                &["colony", "code", "coloniser", "players", "value_lost_eur"],
                losses.iter().map(|l| {
                    vec![
                        l.colony.display_name.clone(),
                        l.colony.sovereign_code().to_owned(),
                        l.coloniser.display_name.clone(),
                        l.players.to_string(),
                        l.value_lost.to_string(),
                    ]
                }),
            );
            vec![
                Artifact { file: "mapdata_net.csv".into(), contents: net_csv },
                Artifact { file: "mapdata_colonies.csv".into(), contents: losses_csv },
            ]
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flowledger::country_summaries;
    use crate::ingest::{CountryResolver, IndicatorTable};

    fn fixture() -> Vec<BilateralFlow> {
        let r = CountryResolver::bundled();
        let f = |o: &str, d: &str, n, v| BilateralFlow {
            origin: r.resolve_country(o),
            destination: r.resolve_country(d),
            player_count: n,
            total_value: v,
        };
        vec![f("Senegal", "France", 2, 30_000_000), f("Italy", "Argentina", 3, 45_500_000), f("Mali", "France", 1, 30_000_000)]
    }

    #[test]
    fn corridors_sorted_and_truncated() {
        let fl = fixture();
        let top = top_corridors(&fl, 2);
        assert_eq!(top[0].origin.display_name, "Italy");
        assert_eq!(top[1].origin.display_name, "Mali");
        let csv = corridor_dump(top);
        assert_eq!(csv.lines().next().unwrap(), "origin,destination,players,value_eur");
        assert_eq!(csv.lines().nth(1).unwrap(), "Italy,Argentina,3,45500000");
    }

    #[test]
    fn one_corridor_map() {
        let r = CountryResolver::bundled();
        let fl = vec![BilateralFlow {
            origin: r.resolve_country("Ghana"),
            destination: r.resolve_country("Germany"),
            player_count: 1,
            total_value: 7,
        }];
        let net = net_by_map_code(&country_summaries(&fl, &IndicatorTable::new()));
        assert_eq!(net.len(), 2);
        assert_eq!((net["GHA"], net["DEU"]), (-7, 7));
    }

    #[test]
    fn flow_panels_rank_each_side() {
        let s = country_summaries(&fixture(), &IndicatorTable::new());
        let p = flow_panels(&s, 10);
        assert_eq!(p.value_gained[0].country.display_name, "France");
        assert_eq!(p.largest_losers[0].country.display_name, "Italy");
        assert!(p.largest_gainers.iter().all(|s| s.net > 0));
        let text = flows_text(&s);
        assert!(text.contains("France"));
        assert!(text.contains("60.0"));
    }

    fn flows_text(s: &[CountrySummary]) -> String {
        flows(s, 10, OutputFormat::Text).contents
    }

    #[test]
    fn artifact_names_follow_format() {
        let s = country_summaries(&fixture(), &IndicatorTable::new());
        assert_eq!(flows(&s, 10, OutputFormat::Json).file, "flows.json");
        assert_eq!(mapdata(&s, &[], OutputFormat::Csv).len(), 2);
    }
}
