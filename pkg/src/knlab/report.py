"""Run reports: records plus tables, rendered as JSON, CSV or text.

Rendering is deterministic; nothing time-dependent is included unless a
record carries it explicitly.
"""
import csv
import io
import json
import os
from dataclasses import dataclass, field


@dataclass
class Table:
    name: str
    header: list
    rows: list

    def to_json(self):
        return {"name": self.name, "header": self.header, "rows": self.rows}


@dataclass
class Report:
    command: str
    context: dict = field(default_factory=dict)
    records: list = field(default_factory=list)
    tables: list = field(default_factory=list)

    def add(self, task, check, ok, detail=None, **extra):
        rec = {"task": task, "check": check, "ok": ok}
        if detail is not None:
            rec["detail"] = detail
        rec.update(extra)
        self.records.append(rec)
        return rec

    def extend(self, other):
        self.records += other.records
        self.tables += other.tables

    @property
    def failures(self):
        return [r for r in self.records if r["ok"] is False]

    @property
    def passed(self):
        return not self.failures

    def summary(self):
        checked = [r for r in self.records if r["ok"] is not None]
        return {"checks": len(checked), "failed": len(self.failures)}

    # -- rendering ------------------------------------------------------------
    def to_json(self):
        doc = {
            "command": self.command,
            "context": self.context,
            "summary": self.summary(),
            "records": self.records,
            "tables": [t.to_json() for t in self.tables],
        }
        return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"

    def records_csv(self):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["task", "check", "status", "detail"])
        for r in self.records:
            w.writerow([r["task"], r["check"], _status(r["ok"]), _flat(r.get("detail", ""))])
        return buf.getvalue()

    @staticmethod
    def table_csv(table):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(table.header)
        w.writerows(table.rows)
        return buf.getvalue()

    def to_csv(self):
        parts = [self.records_csv()]
        for t in self.tables:
            parts.append(f"# {t.name}\n" + self.table_csv(t))
        return "\n".join(parts)

    def to_text(self):
        lines = [f"== {self.command} =="]
        for k, v in self.context.items():
            lines.append(f"{k}: {v}")
        for r in self.records:
            detail = r.get("detail")
            tail = f": {_flat(detail)}" if detail not in (None, "") else ""
            lines.append(f"[{_status(r['ok'])}] {r['task']} / {r['check']}{tail}")
        for t in self.tables:
            lines.append("")
            lines.append(f"-- {t.name} --")
            lines += _aligned([t.header] + t.rows)
        s = self.summary()
        lines.append("")
        lines.append(f"{s['checks']} checks, {s['failed']} failed")
        return "\n".join(lines) + "\n"

    def render(self, fmt):
        return {"json": self.to_json, "csv": self.to_csv, "text": self.to_text}[fmt]()

    def write(self, out_dir, fmt):
        """Write the report into ``out_dir``; CSV puts every table in its own file."""
        os.makedirs(out_dir, exist_ok=True)
        written = []
        if fmt == "csv":
            files = {"records.csv": self.records_csv()}
            for t in self.tables:
                files[f"{_slug(t.name)}.csv"] = self.table_csv(t)
        else:
            files = {f"report.{'json' if fmt == 'json' else 'txt'}": self.render(fmt)}
        for name, text in files.items():
            path = os.path.join(out_dir, name)
            with open(path, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
            written.append(path)
        return written


def _status(ok):
    return {True: "PASS", False: "FAIL", None: "INFO"}[ok]


def _flat(detail):
    if isinstance(detail, (dict, list)):
        return json.dumps(detail, ensure_ascii=False, sort_keys=True)
    return str(detail)


def _slug(name):
    return "".join(c if c.isalnum() or c in "-_" else "_" for c in name).strip("_") or "table"


def _aligned(rows):
    rows = [[str(c) for c in r] for r in rows]
    widths = [max(len(r[i]) for r in rows if i < len(r)) for i in range(max(map(len, rows)))]
    return ["  ".join(c.ljust(widths[i]) for i, c in enumerate(r)).rstrip() for r in rows]
