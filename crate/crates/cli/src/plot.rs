//! gnuplot script over the table files: one PNG per group, `a` against `t`.

use crate::commands::table::TableRow;

pub const SCRIPT_NAME: &str = "plot.gp";

pub fn gnuplot_script(files: &[(&TableRow, String)]) -> String {
    let mut s = String::from(
        "# run from this directory: gnuplot plot.gp\n\
         set datafile separator ','\n\
         set terminal pngcairo size 900,600\n\
         set xlabel 't'\n\
         set ylabel 'a(t)'\n\
         set key left top\n",
    );
    let mut groups: Vec<&str> = Vec::new();
    for (r, _) in files {
        if !groups.contains(&r.group.as_str()) {
            groups.push(&r.group);
        }
    }
    for g in groups {
        s.push_str(&format!("\nset output '{g}.png'\nset title '{g}'\nplot "));
        let entries: Vec<String> = files
            .iter()
            .filter(|(r, _)| r.group == g)
            .map(|(r, name)| format!("'{name}' skip 1 using 1:2 with lines title '{}'", r.label))
            .collect();
        s.push_str(&entries.join(", \\\n     "));
        s.push('\n');
    }
    s.push_str("\nset output\n");
    s
}
