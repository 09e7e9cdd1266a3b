"""
Lab report writer
Writes the table reproductions and the identity checks to a formatted Word document
"""

import sys
from fractions import Fraction
from math import comb, factorial

import mpmath
from docx import Document
from docx.enum.style import WD_STYLE_TYPE
from docx.enum.table import WD_TABLE_ALIGNMENT
from docx.enum.text import WD_ALIGN_PARAGRAPH, WD_LINE_SPACING
from docx.shared import Inches, Pt

from .counterexample import ak_normalized_extremes
from .em_engine import expand_alternating, expand_regular
from .models import exp_model
from .modular_lab import PRINTED_TABLE1, PRINTED_TABLE2, STATUS_OK, format_magnitude
from .numerics import PrecisionContext
from .special_fn import (
    bernoulli_number,
    bernoulli_poly,
    bernoulli_poly_coefficients,
    digamma_constant,
    euler_poly,
)


class LabReportWriter:
    def __init__(self, title="Asymptotic laboratory report", verbose=True):
        self.title = title
        self.verbose = verbose
        self.doc = Document()
        self.table_count = 0
        self.report_standards = {
            "font": "Times New Roman",
            "body_size": 12,
            "heading_size": 14,
            "title_size": 16,
            "table_size": 10,
        }
        self.setup_styles()
        self.set_page_margins()

    def _log(self, message):
        if self.verbose:
            print(message, file=sys.stderr)

    def setup_styles(self):
        """Body, heading and caption styles of the report"""
        styles = self.doc.styles
        standards = self.report_standards
        existing = [s.name for s in styles]

        def paragraph_style(name, size, bold, alignment, space):
            if name in existing:
                return
            style = styles.add_style(name, WD_STYLE_TYPE.PARAGRAPH)
            style.font.name = standards["font"]
            style.font.size = Pt(size)
            style.font.bold = bold
            fmt = style.paragraph_format
            fmt.alignment = alignment
            fmt.line_spacing_rule = WD_LINE_SPACING.ONE_POINT_FIVE
            fmt.space_before = Pt(space)
            fmt.space_after = Pt(space)

        paragraph_style("Lab Title", standards["title_size"], True, WD_ALIGN_PARAGRAPH.CENTER, 12)
        paragraph_style("Lab Heading", standards["heading_size"], True, WD_ALIGN_PARAGRAPH.LEFT, 6)
        paragraph_style("Lab Normal", standards["body_size"], False, WD_ALIGN_PARAGRAPH.JUSTIFY, 0)
        paragraph_style("Lab Caption", standards["body_size"], True, WD_ALIGN_PARAGRAPH.CENTER, 6)

    def set_page_margins(self):
        """A4 pages with one-inch margins"""
        for section in self.doc.sections:
            section.top_margin = Inches(1.0)
            section.bottom_margin = Inches(1.0)
            section.left_margin = Inches(1.0)
            section.right_margin = Inches(1.0)
            section.page_width = Inches(8.27)
            section.page_height = Inches(11.69)

    def add_title(self):
        self.doc.add_paragraph(self.title, style="Lab Title")

    def add_heading(self, text):
        self.doc.add_paragraph(text, style="Lab Heading")

    def add_paragraph(self, text):
        self.doc.add_paragraph(text, style="Lab Normal")

    def add_table(self, caption, header, rows):
        """Captioned, centered table with every cell in the report font"""
        self.table_count += 1
        self.doc.add_paragraph(f"Table {self.table_count}: {caption}", style="Lab Caption")
        table = self.doc.add_table(rows=1, cols=len(header))
        table.style = "Table Grid"
        table.alignment = WD_TABLE_ALIGNMENT.CENTER
        for cell, text in zip(table.rows[0].cells, header):
            cell.text = text
        for row in rows:
            cells = table.add_row().cells
            for cell, text in zip(cells, row):
                cell.text = str(text)
        self.format_table(table, header_bold=True)
        return table

    def format_table(self, table, header_bold=False):
        for index, row in enumerate(table.rows):
            for cell in row.cells:
                for paragraph in cell.paragraphs:
                    paragraph.alignment = WD_ALIGN_PARAGRAPH.CENTER
                    for run in paragraph.runs:
                        run.font.name = self.report_standards["font"]
                        run.font.size = Pt(self.report_standards["table_size"])
                        run.font.bold = header_bold and index == 0

    def add_table1(self, rows):
        self.add_heading("Partition generating function")
        self.add_paragraph(
            "Size of P(e^{-z}) sqrt(2 pi/z) e^{-pi^2/(6z)} - 1 along z = x + ix, "
            "z = x + ix^2 and the tangential path z = x + ix^{1/3}."
        )
        body = []
        for row in rows:
            printed = PRINTED_TABLE1.get((row.exponent, row.path), "")
            body.append([row.x_label, row.path, format_magnitude(row.error), printed,
                         row.extras.get("relative_gap", "")])
        self.add_table(
            "Main-term error of the partition generating function",
            ["x", "path exponent", "computed", "printed", "relative gap"],
            body,
        )

    def add_table2(self, rows):
        self.add_heading("Eisenstein series g3")
        self.add_paragraph(
            "Size of g3(e^{-w}) - pi^4/(15 w^4) + 1/240 computed directly and through "
            "the modular transformation. Rows refused at the precision ceiling keep "
            "only the inverted-side value."
        )
        body = []
        for row in rows:
            computed = format_magnitude(row.error) if row.status == STATUS_OK else row.status
            body.append([
                row.x_label,
                row.path,
                computed,
                row.extras.get("oracle", ""),
                row.extras.get("agreeing_digits", ""),
                PRINTED_TABLE2.get((row.exponent, row.path), ""),
            ])
        self.add_table(
            "Direct and modular values of the g3 error",
            ["x", "path exponent", "direct", "modular", "digits", "printed"],
            body,
        )

    def add_identity_summary(self, checks):
        self.add_heading("Identity checks")
        self.add_table(
            "Exact and high-precision identity checks",
            ["identity", "result"],
            [[name, "passed" if ok else "FAILED"] for name, ok in checks],
        )

    def save(self, output_path):
        self.doc.save(output_path)
        self._log(f"✅ Lab report saved as: {output_path}")
        return output_path


def reciprocal_series(coeffs, order):
    """First order Taylor coefficients of 1/g from those of g, exactly; g(0) != 0"""
    inverse = [Fraction(1) / coeffs[0]]
    for n in range(1, order):
        total = sum(coeffs[j] * inverse[n - j] for j in range(1, min(n, len(coeffs) - 1) + 1))
        inverse.append(-total / coeffs[0])
    return tuple(inverse)


def run_identity_checks(ctx: PrecisionContext = None):
    """(name, passed) pairs for the identity suites quoted in the report"""
    ctx = ctx or PrecisionContext.with_bits(128)
    checks = []

    derivative_ok = all(
        all(
            (k + 1) * c == (n + 1) * b
            for k, (c, b) in enumerate(zip(bernoulli_poly_coefficients(n + 1)[1:], bernoulli_poly_coefficients(n)))
        )
        for n in range(0, 51)
    )
    checks.append(("B'_{n+1}(x) = (n+1) B_n(x), n <= 50", derivative_ok))

    odd_ok = all(bernoulli_number(2 * k + 1) == 0 for k in range(1, 26))
    checks.append(("B_{2k+1} = 0, 2k+1 <= 51", odd_ok))

    translation_ok = all(
        bernoulli_poly(k, x + y)
        == sum(comb(k, n) * bernoulli_poly(n, x) * y ** (k - n) for n in range(k + 1))
        for k in range(51)
        for x in (Fraction(0), Fraction(1, 2), Fraction(1), Fraction(2))
        for y in (Fraction(0), Fraction(1, 2), Fraction(1), Fraction(2))
    )
    checks.append(("B_k(x+y) = sum C(k,n) B_n(x) y^{k-n}, k <= 50", translation_ok))

    half_shift_ok = all(
        bernoulli_poly(n + 1, x / 2) - bernoulli_poly(n + 1, x / 2 + Fraction(1, 2))
        == -Fraction(n + 1, 2 ** (n + 1)) * euler_poly(n, x)
        for n in range(51)
        for x in (Fraction(0), Fraction(1, 3), Fraction(1))
    )
    checks.append(("B_{n+1}(x/2) - B_{n+1}(x/2 + 1/2) = -(n+1) 2^{-n-1} E_n(x), n <= 50", half_shift_ok))

    euler_ok = all(
        euler_poly(n, x)
        == Fraction(2, n + 1) * (bernoulli_poly(n + 1, x) - 2 ** (n + 1) * bernoulli_poly(n + 1, x / 2))
        for n in range(51)
        for x in (Fraction(0), Fraction(1, 3), Fraction(1))
    )
    checks.append(("E_n(x) = 2/(n+1) (B_{n+1}(x) - 2^{n+1} B_{n+1}(x/2)), n <= 50", euler_ok))

    series = expand_regular(exp_model(), 0, 20, ctx)
    geometric_ok = all(
        series.poly_coeffs[n] == bernoulli_number(n + 1) * (-1) ** (n + 1) / factorial(n + 1)
        for n in range(20)
    )
    checks.append(("expansion of 1/(1 - e^{-w}) matches B_n(0)(-w)^n/n!", geometric_ok))

    alternating = expand_alternating(exp_model(), 0, 12, ctx)
    # 1 + e^{-w} = 2 - w + w^2/2 - ...
    denominator = [Fraction(2)] + [Fraction((-1) ** n, factorial(n)) for n in range(1, 12)]
    checks.append(
        ("alternating expansion equals the Taylor series of 1/(1 + e^{-w}), n < 12",
         alternating.poly_coeffs == reciprocal_series(denominator, 12))
    )

    with ctx.workprec():
        gap = abs(digamma_constant(Fraction(1, 2), ctx) - 2 * mpmath.log(2))
        checks.append(("C_{1/2} = 2 log 2", gap <= mpmath.mpf(10) ** -30))
    checks.append(("u_m = 1 exactly", all(ak_normalized_extremes(m, ctx)[0] == 1 for m in (1, 10, 1000))))
    return checks


def write_lab_report(output_path, table1_rows=None, table2_rows=None, checks=None, verbose=True):
    """Assemble and save the report; sections without data are left out"""
    writer = LabReportWriter(verbose=verbose)
    writer._log("📄 Writing lab report ...")
    writer.add_title()
    if table1_rows:
        writer.add_table1(table1_rows)
    if table2_rows:
        writer.add_table2(table2_rows)
    if checks:
        writer.add_identity_summary(checks)
    return writer.save(output_path)
