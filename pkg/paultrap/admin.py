from django.contrib import admin
from .models import ScenarioRun


@admin.register(ScenarioRun)
class ScenarioRunAdmin(admin.ModelAdmin):
    list_display = ('id', 'command', 'status', 'exit_code', 'created_at')
    search_fields = ('command', 'error_message')
    list_filter = ('status', 'command')
    readonly_fields = ('output', 'result', 'error_message', 'created_at', 'updated_at')
