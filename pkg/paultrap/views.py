import json

from django.http import JsonResponse
from django.shortcuts import get_object_or_404
from django.utils.decorators import method_decorator
from django.views import View
from django.views.decorators.csrf import csrf_exempt

from .forms import ScenarioRunForm
from .models import ScenarioRun
from .tasks import run_scenario_task
from .utils import check_broker_status


@method_decorator(csrf_exempt, name='dispatch')
class RunListView(View):
    def get(self, request):
        runs = ScenarioRun.objects.all()
        status = request.GET.get('status')
        if status:
            runs = runs.filter(status=status)
        return JsonResponse({'runs': [run.as_dict() for run in runs]})

    def post(self, request):
        try:
            data = json.loads(request.body)
        except json.JSONDecodeError:
            return JsonResponse({'status': 'error', 'message': 'Invalid JSON'}, status=400)
        if not isinstance(data, dict):
            return JsonResponse({'status': 'error', 'message': 'Expected a JSON object'}, status=400)

        form = ScenarioRunForm({
            'command': data.get('command'),
            'arguments': json.dumps(data.get('arguments', [])),
        })
        if not form.is_valid():
            return JsonResponse({'status': 'error', 'errors': form.errors.get_json_data()}, status=400)

        run = ScenarioRun.objects.create(
            command=form.cleaned_data['command'],
            arguments=form.cleaned_data['arguments'],
        )
        response = {'status': 'ok', 'run': run.as_dict()}

        broker_ok, broker_err = check_broker_status()
        if broker_ok:
            run_scenario_task.delay(run.id)
        else:
            response['warning'] = f"Queue service (Redis) is offline, run {run.id} stays pending: {broker_err}"
        return JsonResponse(response, status=201)


class RunDetailView(View):
    def get(self, request, run_id):
        run = get_object_or_404(ScenarioRun, pk=run_id)
        return JsonResponse({'run': run.as_dict()})
