"""Markdown summary of a verify-all run.

The summary is meant for a human skimming the outcome of the acceptance
suite: one heading with the overall verdict, a table with one row per
criterion, and the details of any failures.

Report Structure:
    1. Title and profile
    2. Overall verdict
    3. Criterion table (number, title, verdict)
    4. Failure details, or a note that there are none

Functions:
    write_to_markdown: Write the summary of a VerificationReport
"""

from acceptance import VerificationReport
from constants import DEFAULT_REPORT_FILE


def _escape_cell(text: str) -> str:
    return text.replace("|", "\\|").replace("\n", " ")


def write_to_markdown(
    report: VerificationReport,
    output_file: str = "",
    report_title: str = "Unitriangular census verification",
) -> None:
    """
    Write a Markdown summary of a verify-all run.

    Args:
        report (VerificationReport): The finished run.
        output_file (str, optional): Destination file. Defaults to DEFAULT_REPORT_FILE
                                     if empty.
        report_title (str, optional): The title at the top of the summary.

    Side Effects:
        - Creates or overwrites the output file, UTF-8 encoded
    """
    output_file_name = output_file if output_file else DEFAULT_REPORT_FILE
    with open(output_file_name, "w", encoding="utf-8") as report_file:
        report_file.write(f"# {report_title}\n\n")
        report_file.write(f"## Profile: {report.profile}\n\n")
        verdict = "PASS" if report.passed else "FAIL"
        report_file.write(f"### Verdict: {verdict}\n\n")

        report_file.write("## Criteria:\n")
        if report.results:
            report_file.write("| # | Criterion | Verdict |\n")
            report_file.write("| --- | --- | --- |\n")
            for result in report.results:
                report_file.write(
                    f"| {result.number} | {_escape_cell(result.title)} | "
                    f"{result.verdict} |\n"
                )
        else:
            report_file.write("No criteria were run.\n")

        report_file.write("\n## Failures:\n")
        if report.failures:
            for result in report.failures:
                report_file.write(f"- {result.number}. {result.title}: {_escape_cell(result.detail)}\n")
        else:
            report_file.write("No failures.\n")
