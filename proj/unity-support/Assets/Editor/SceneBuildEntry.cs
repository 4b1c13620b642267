// unigen-support v1.0.0 — do not edit
using System;
using System.IO;
using System.Reflection;
using UnityEditor;
using UnityEditor.SceneManagement;
using UnityEngine;

namespace UniGen.EditorSupport
{
    /// <summary>
    /// Batch-mode entry: runs the generated scene builder, saves the scene and
    /// exits with 0 on success or 1 on any exception.
    /// </summary>
    public static class SceneBuildEntry
    {
        public const string ScenePath = "Assets/Scenes/Main.unity";
        public const string BuilderType = "UniGen.Generated.SceneBuilder";

        // -executeMethod UniGen.EditorSupport.SceneBuildEntry.BuildBatch
        public static void BuildBatch()
        {
            Run(InvokeGeneratedBuilder);
        }

        public static void Run(Action build)
        {
            try
            {
                build();
                SaveScene();
                Debug.Log("[UniGen] scene saved to " + ScenePath);
                EditorApplication.Exit(0);
            }
            catch (Exception e)
            {
                Debug.LogError("[UniGen] scene build failed: " + e);
                EditorApplication.Exit(1);
            }
        }

        public static void SaveScene()
        {
            Directory.CreateDirectory(Path.GetDirectoryName(ScenePath));
            var scene = EditorSceneManager.GetActiveScene();
            if (!EditorSceneManager.SaveScene(scene, ScenePath))
            {
                throw new IOException("could not save scene to " + ScenePath);
            }
            AssetDatabase.Refresh();
        }

        private static void InvokeGeneratedBuilder()
        {
            Type builder = null;
            foreach (Assembly assembly in AppDomain.CurrentDomain.GetAssemblies())
            {
                builder = assembly.GetType(BuilderType);
                if (builder != null)
                {
                    break;
                }
            }
            if (builder == null)
            {
                throw new InvalidOperationException("type " + BuilderType + " not found");
            }
            MethodInfo build = builder.GetMethod("Build", BindingFlags.Public | BindingFlags.Static);
            if (build == null)
            {
                throw new InvalidOperationException(BuilderType + ".Build() not found");
            }
            try
            {
                build.Invoke(null, null);
            }
            catch (TargetInvocationException e)
            {
                throw e.InnerException ?? e;
            }
        }
    }
}
