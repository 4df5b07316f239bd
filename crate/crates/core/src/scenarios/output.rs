use std::fmt::Write as _;

use super::{Bound, Ctx, RunReport};
use crate::Result;

pub(crate) fn report_text(r: &RunReport) -> String {
    let mut s = String::new();
    let status = match r.exit_code() {
        0 => "PASS",
        1 => "FAIL",
        2 => "CONFIG ERROR",
        _ => "NUMERICAL ERROR",
    };
    let _ = writeln!(s, "scenario {}: {status} ({:.3} s)", r.scenario, r.wall_time.as_secs_f64());
    let _ = writeln!(s, "  {}", r.scenario.summary());
    let params: Vec<String> = r.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
    let _ = writeln!(s, "  params: {}", params.join(" "));
    if let Some((_, msg)) = &r.error {
        let _ = writeln!(s, "  error: {msg}");
    }
    for c in &r.checks {
        let (mark, bound) = match c.bound {
            Bound::AtMost(b) => (if c.passed() { "ok  " } else { "FAIL" }, format!("<= {b:.3e}")),
            Bound::AtLeast(b) => (if c.passed() { "ok  " } else { "FAIL" }, format!(">= {b:.3e}")),
            Bound::Info => ("info", String::new()),
        };
        let _ = writeln!(s, "  [{mark}] {:<52} {:>14.6e} {bound}", c.name, c.value);
    }
    for n in &r.notes {
        let _ = writeln!(s, "  note: {n}");
    }
    for f in &r.files {
        let _ = writeln!(s, "  wrote {}", f.display());
    }
    s
}

fn plot_script(ctx: &Ctx) -> String {
    let mut s = String::from("# gnuplot script; run with: gnuplot -persist plot.gp\n");
    s.push_str("set datafile separator ','\nset key autotitle columnhead\nset xlabel 't'\n");
    for (i, p) in ctx.plots.iter().enumerate() {
        let file = p.file.file_name().map(|f| f.to_string_lossy().into_owned()).unwrap_or_default();
        let _ = writeln!(s, "\n# figure {}\nset title '{}'", i + 1, p.title);
        s.push_str(if p.log_y { "set logscale y\n" } else { "unset logscale y\n" });
        let parts: Vec<String> = p
            .columns
            .iter()
            .map(|c| format!("'{file}' using 1:{c} with lines"))
            .collect();
        let _ = writeln!(s, "plot {}", parts.join(", \\\n     "));
        s.push_str("pause -1 'press enter for the next figure'\n");
    }
    s
}

pub(crate) fn write_artifacts(ctx: &Ctx, report: &mut RunReport) -> Result<()> {
    let Some(dir) = ctx.dir()? else {
        return Ok(());
    };
    if !ctx.plots.is_empty() {
        let path = dir.join("plot.gp");
        std::fs::write(&path, plot_script(ctx))?;
        report.files.push(path);
    }
    let path = dir.join("report.txt");
    report.files.push(path.clone());
    std::fs::write(&path, report.to_text())?;
    Ok(())
}
