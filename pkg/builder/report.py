"""Plain-text reports for the command line and the workbench, rendered from templates."""

from pathlib import Path

from jinja2 import Environment, FileSystemLoader, StrictUndefined

from fifo.capacity import fifo_plan

TEMPLATE_DIR = Path(__file__).resolve().parent / "templates"

ENV = Environment(
    loader=FileSystemLoader(TEMPLATE_DIR),
    undefined=StrictUndefined,
    trim_blocks=True,
    lstrip_blocks=True,
    keep_trailing_newline=True,
)


def render(template, **context):
    return ENV.get_template(template).render(**context)


def render_check(graph, violations):
    return render("check.txt.j2", graph=graph.name, violations=violations)


def render_analysis(report):
    diagnostics = [d for d in report.diagnostics if d.kind != "RuleViolation"]
    return render("analysis.txt.j2", report=report, diagnostics=diagnostics)


def capacity_rows(graph, c_factor):
    return [{"fifo": fifo.id, "token_bytes": fifo.token_bytes, "plan": fifo_plan(fifo, c_factor)}
            for fifo in graph.fifos]


def render_capacity(graph, c_factor):
    return render("capacity.txt.j2", graph=graph.name, c_factor=c_factor,
                  rows=capacity_rows(graph, c_factor))


def render_run(run, oracle=None):
    """`oracle` is None when no comparison ran, else whether the digests matched."""
    return render("run.txt.j2", run=run, oracle=oracle)


def render_bench(graph, firings, runtime_rate, interpreter_rate):
    ratio = runtime_rate / interpreter_rate if interpreter_rate else 0.0
    return render("bench.txt.j2", graph=graph.name, firings=firings,
                  runtime_rate=runtime_rate, interpreter_rate=interpreter_rate, ratio=ratio)
