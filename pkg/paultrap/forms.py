from django import forms

from .cli import COMMANDS


class ScenarioRunForm(forms.Form):
    command = forms.ChoiceField(choices=[(name, name) for name in COMMANDS])
    arguments = forms.JSONField(required=False)

    def clean_arguments(self):
        arguments = self.cleaned_data.get('arguments')
        if arguments in (None, ''):
            return []
        if not isinstance(arguments, list) or not all(isinstance(a, str) for a in arguments):
            raise forms.ValidationError('Arguments must be a list of strings.')
        return arguments
