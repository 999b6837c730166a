"""
PDF Report Generator Module
Renders verification suite results as a PDF report
"""

from collections import OrderedDict
from datetime import datetime
from typing import Dict, List

from src.utils.helpers import format_value


class VerificationReportGenerator:
    """
    Generates PDF reports of verification runs.
    Uses FPDF2 for PDF generation.
    """

    def __init__(self):
        self.page_width = 210  # A4 width in mm
        self.page_height = 297
        self.margin = 15
        self.content_width = self.page_width - (2 * self.margin)

        self.colors = {
            'primary': (41, 128, 185),
            'secondary': (52, 73, 94),
            'success': (39, 174, 96),
            'warning': (241, 196, 15),
            'danger': (231, 76, 60),
            'light': (236, 240, 241),
            'white': (255, 255, 255),
            'black': (0, 0, 0)
        }
        # check, observed, expected, tolerance, status
        self.column_widths = (78, 33, 33, 20, 16)

    def _safe_text(self, text: str) -> str:
        """Convert text to latin-1 safe format for the core fonts."""
        if not text:
            return ""
        replacements = {
            'π': 'pi',
            'ζ': 'zeta',
            'λ': 'lambda',
            'β': 'beta',
            'ω': 'omega',
            '√': 'sqrt',
            '′': "'",
            '–': '-',
            '—': '-',
            '≤': '<=',
            '≥': '>=',
            '→': '->',
            '✓': '[OK]',
            '✗': '[X]',
        }
        result = str(text)
        for unicode_char, ascii_char in replacements.items():
            result = result.replace(unicode_char, ascii_char)
        return result.encode('latin-1', errors='replace').decode('latin-1')

    def generate(self, report) -> bytes:
        """
        Generate the verification report.

        Args:
            report: VerificationReport from the verify suite

        Returns:
            PDF content as bytes
        """
        from fpdf import FPDF

        pdf = FPDF()
        pdf.set_auto_page_break(auto=True, margin=15)
        pdf.add_page()
        self._add_header(pdf, "Verification Report")

        self._add_summary(pdf, report)

        for tag, checks in self._group(report.checks).items():
            if pdf.get_y() > 240:
                pdf.add_page()
            title = tag
            if tag in report.elapsed:
                title = f"{tag} ({report.elapsed[tag]:.2f} s)"
            self._add_section_title(pdf, title)
            self._add_check_table(pdf, checks)

        failures = report.failures
        if failures:
            pdf.add_page()
            self._add_header(pdf, "Failed Checks")
            for check in failures:
                pdf.set_font('Helvetica', 'B', 10)
                pdf.set_text_color(*self.colors['danger'])
                pdf.multi_cell(self.content_width, 6, self._safe_text(f"[{check.tag}] {check.name}"))
                pdf.set_text_color(*self.colors['black'])
                pdf.set_font('Helvetica', '', 9)
                pdf.multi_cell(self.content_width, 5, self._safe_text(check.message or "-"))
                pdf.ln(2)

        self._add_footer(pdf)
        return bytes(pdf.output())

    def _group(self, checks: List) -> "OrderedDict[str, List]":
        groups: "OrderedDict[str, List]" = OrderedDict()
        for check in checks:
            groups.setdefault(check.tag, []).append(check)
        return groups

    def _add_header(self, pdf, title: str):
        """Add report header."""
        pdf.set_fill_color(*self.colors['primary'])
        pdf.rect(0, 0, self.page_width, 40, 'F')

        pdf.set_text_color(*self.colors['white'])
        pdf.set_font('Helvetica', 'B', 20)
        pdf.set_xy(self.margin, 12)
        pdf.cell(0, 10, title, ln=True)

        pdf.set_font('Helvetica', '', 10)
        pdf.set_xy(self.margin, 25)
        pdf.cell(0, 10, f"Generated: {datetime.now().strftime('%Y-%m-%d %H:%M:%S')}")

        pdf.set_text_color(*self.colors['black'])
        pdf.set_xy(self.margin, 50)

    def _add_summary(self, pdf, report):
        """Overall pass/fail box."""
        color = self.colors['success'] if report.all_passed else self.colors['danger']
        pdf.set_fill_color(*color)
        pdf.set_text_color(*self.colors['white'])
        pdf.set_font('Helvetica', 'B', 12)

        box_width, box_height = 90, 22
        x = (self.page_width - box_width) / 2
        y = pdf.get_y()
        pdf.rect(x, y, box_width, box_height, 'F')
        pdf.set_xy(x, y + 4)
        pdf.cell(box_width, 8, "ALL CHECKS PASSED" if report.all_passed else "CHECKS FAILED",
                 align='C', ln=True)
        pdf.set_xy(x, y + 13)
        pdf.set_font('Helvetica', '', 10)
        pdf.cell(box_width, 6, f"{report.passed_count} of {report.total} passed", align='C')

        pdf.set_text_color(*self.colors['black'])
        pdf.set_xy(self.margin, y + box_height + 4)
        if report.tag:
            pdf.set_font('Helvetica', 'I', 9)
            pdf.cell(0, 6, self._safe_text(f"Filtered to tag '{report.tag}'"), ln=True)

    def _add_section_title(self, pdf, title: str):
        """Add a section title."""
        pdf.ln(4)
        pdf.set_font('Helvetica', 'B', 13)
        pdf.set_text_color(*self.colors['primary'])
        pdf.cell(0, 9, self._safe_text(title), ln=True)
        pdf.set_text_color(*self.colors['black'])

        pdf.set_draw_color(*self.colors['primary'])
        pdf.line(self.margin, pdf.get_y(), self.page_width - self.margin, pdf.get_y())
        pdf.ln(2)

    def _add_check_table(self, pdf, checks: List):
        widths = self.column_widths
        pdf.set_font('Helvetica', 'B', 8)
        pdf.set_fill_color(*self.colors['light'])
        for width, heading in zip(widths, ("Check", "Observed", "Expected", "Tol", "Status")):
            pdf.cell(width, 6, heading, border=1, fill=True)
        pdf.ln()

        pdf.set_font('Helvetica', '', 8)
        for check in checks:
            record = check.to_record()
            cells = (
                self._safe_text(record["check"])[:52],
                format_value(record["observed"], 8),
                format_value(record["expected"], 8),
                f"{record['tolerance']:.0e}" if record["tolerance"] else "0",
            )
            for width, text in zip(widths, cells):
                pdf.cell(width, 6, text, border=1)
            pdf.set_text_color(*self._status_color(record["status"]))
            pdf.cell(widths[-1], 6, record["status"], border=1, ln=True)
            pdf.set_text_color(*self.colors['black'])

    def _add_footer(self, pdf):
        """Add footer to all pages."""
        total_pages = pdf.page_no()

        for page in range(1, total_pages + 1):
            pdf.page = page
            pdf.set_y(-15)
            pdf.set_font('Helvetica', 'I', 8)
            pdf.set_text_color(*self.colors['secondary'])
            pdf.cell(0, 10, f'Page {page} of {total_pages} | Hybrid Spectral Toolkit', align='C')

    def _status_color(self, status: str) -> tuple:
        if status == "PASS":
            return self.colors['success']
        if status == "INFO":
            return self.colors['warning']
        return self.colors['danger']

    def summary_record(self, report) -> Dict:
        """Per-tag pass counts, as shown in the section titles."""
        return {tag: {"passed": sum(1 for c in checks if c.passed), "total": len(checks)}
                for tag, checks in self._group(report.checks).items()}
