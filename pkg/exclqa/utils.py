"""
File and database helpers for the exclqa app.

The file helpers are plain-Python so that benchmark worker processes can use
them; database helpers import the models lazily.
"""
import csv
import json
from pathlib import Path


def write_json(path, data):
    """Write data as indented JSON, creating parent directories."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open('w', encoding='utf-8') as handle:
        json.dump(data, handle, indent=2)
        handle.write('\n')
    return path


def read_json(path):
    with Path(path).open(encoding='utf-8') as handle:
        return json.load(handle)


def write_jsonl(path, rows):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open('w', encoding='utf-8') as handle:
        for row in rows:
            handle.write(json.dumps(row, sort_keys=False))
            handle.write('\n')
    return path


def read_jsonl(path):
    with Path(path).open(encoding='utf-8') as handle:
        return [json.loads(line) for line in handle if line.strip()]


def format_cell(value):
    """
    CSV cell text: empty for missing values, lowercase booleans and
    repr() for floats so that reruns produce byte-identical files.
    """
    if value is None:
        return ''
    if isinstance(value, bool):
        return 'true' if value else 'false'
    if isinstance(value, float):
        return repr(value)
    return value


def write_csv(path, columns, rows):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open('w', encoding='utf-8', newline='') as handle:
        writer = csv.DictWriter(handle, fieldnames=list(columns), extrasaction='ignore', lineterminator='\n')
        writer.writeheader()
        for row in rows:
            writer.writerow({key: format_cell(row.get(key)) for key in columns})
    return path


def read_csv(path):
    with Path(path).open(encoding='utf-8', newline='') as handle:
        return list(csv.DictReader(handle))


def save_run_records(instances, records):
    """
    Store benchmark instances and run records in the results database.

    Args:
        instances: bench.Instance objects the records refer to
        records: bench.RunRecord objects

    Returns:
        The number of RunResult rows created.

    Instances are matched on (instance_id, seed), so storing a rerun of the
    same sweep reuses the existing LatticeInstance rows.
    """
    from django.db import transaction

    from .models import LatticeInstance, RunResult

    by_id = {inst.id: inst for inst in instances}
    with transaction.atomic():
        stored = {}
        for inst in instances:
            row, _ = LatticeInstance.objects.get_or_create(
                instance_id=inst.id,
                seed=inst.seed,
                defaults={
                    'rank': inst.rank,
                    'q': inst.q,
                    'd': inst.d,
                    'k_qary': inst.k_qary,
                    'lambda1_sq': inst.lambda1_sq,
                    'shortest_x': list(inst.x),
                    'basis_rows': [list(r) for r in inst.basis.rows],
                },
            )
            stored[inst.id] = row
        results = [
            RunResult(
                method=record.method,
                instance=stored[record.instance_id],
                rank=record.rank,
                valid=record.valid,
                solved=record.solved,
                shots_used=record.shots_used,
                best_norm_sq=record.best_norm_sq,
                lambda1_sq=record.lambda1_sq,
                approx_factor=record.approx_factor,
            )
            for record in records
            if record.instance_id in by_id
        ]
        RunResult.objects.bulk_create(results)
    return len(results)
