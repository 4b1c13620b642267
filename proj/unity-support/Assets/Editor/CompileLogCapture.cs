// unigen-support v1.0.0 — do not edit
using System.Text.RegularExpressions;
using UnityEditor;
using UnityEditor.Compilation;
using UnityEngine;

namespace UniGen.EditorSupport
{
    // Echoes compiler messages to the editor log as
    //   <path>(<line>,<col>): <error|warning> <CODE>: <message>
    // so a batch-mode -logFile can be pasted into the debugging chat.
    [InitializeOnLoad]
    public static class CompileLogCapture
    {
        private static readonly Regex Grammar =
            new Regex(@"^(.+)\((\d+),(\d+)\): (error|warning) ([A-Z]{2}[0-9]{4}): (.*)$");
        private static readonly Regex Code = new Regex(@"\b([A-Z]{2}[0-9]{4})\b");

        static CompileLogCapture()
        {
            CompilationPipeline.assemblyCompilationFinished += OnAssemblyCompiled;
        }

        private static void OnAssemblyCompiled(string assemblyPath, CompilerMessage[] messages)
        {
            foreach (CompilerMessage message in messages)
            {
                string line = Format(message);
                if (line == null)
                {
                    continue;
                }
                LogType type = message.type == CompilerMessageType.Error ? LogType.Error : LogType.Warning;
                Debug.LogFormat(type, LogOption.NoStacktrace, null, "{0}", line);
            }
        }

        private static string Format(CompilerMessage message)
        {
            string text = message.message ?? string.Empty;
            int newline = text.IndexOf('\n');
            if (newline >= 0)
            {
                text = text.Substring(0, newline).TrimEnd('\r');
            }
            if (Grammar.IsMatch(text))
            {
                return text;
            }
            Match code = Code.Match(text);
            if (!code.Success || string.IsNullOrEmpty(message.file))
            {
                return null;
            }
            string severity = message.type == CompilerMessageType.Error ? "error" : "warning";
            int colon = text.IndexOf(code.Value + ":");
            string body = colon >= 0 ? text.Substring(colon + code.Value.Length + 1).TrimStart() : text;
            int line = message.line > 0 ? message.line : 1;
            int column = message.column > 0 ? message.column : 1;
            return message.file.Replace('\\', '/') + "(" + line + "," + column + "): " + severity + " " + code.Value + ": " + body;
        }
    }
}
