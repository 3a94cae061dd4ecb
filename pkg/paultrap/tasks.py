import io
import json

from celery import shared_task
from celery.utils.log import get_task_logger

from . import cli
from .models import ScenarioRun

logger = get_task_logger(__name__)


@shared_task(bind=True)
def run_scenario_task(self, run_id):
    try:
        run = ScenarioRun.objects.get(id=run_id)
    except ScenarioRun.DoesNotExist:
        logger.warning("Scenario run %s no longer exists", run_id)
        return f"Run {run_id} missing"
    if run.status != 'pending':
        return f"Run {run.status}"

    run.status = 'running'
    run.error_message = None
    run.save()

    stdout, stderr = io.StringIO(), io.StringIO()
    logger.info("Running scenario %s: %s", run.id, ' '.join(run.argv))
    code = cli.run(run.argv, stdout=stdout, stderr=stderr)

    run.exit_code = code
    run.output = stdout.getvalue()
    try:
        run.result = json.loads(run.output) if run.output else None
    except ValueError:
        # CSV output stays in ``output``
        run.result = None
    if code == 0:
        run.status = 'completed'
    else:
        run.status = 'failed'
        run.error_message = stderr.getvalue().strip() or f"Exited with code {code}"
    run.save()
    return f"Run {run.id} exited with {code}"
