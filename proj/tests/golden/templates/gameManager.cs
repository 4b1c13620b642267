using System.Collections.Generic;
using UnityEngine;

// Owns score and win/lose state. Contact reports from every gameplay script
// and all interaction rules are resolved here.
public class RuleBook : MonoBehaviour
{
    private static RuleBook instance;

    public static RuleBook Instance
    {
        get
        {
            if (instance == null)
            {
                instance = FindObjectOfType<RuleBook>();
            }
            if (instance == null)
            {
                instance = new GameObject("RuleBook").AddComponent<RuleBook>();
            }
            return instance;
        }
    }

    public int score;
    public bool isGameOver;
    public bool hasWon;
    public GameObject hero;
    public string winScore = "15";

    private readonly Dictionary<string, int> contactFrames = new Dictionary<string, int>();
    private readonly HashSet<string> firedRules = new HashSet<string>();

    void Awake()
    {
        if (instance != null && instance != this)
        {
            Destroy(this);
            return;
        }
        instance = this;
    }

    void Start()
    {
        PushScore();
    }

    void Update()
    {
        if (isGameOver || hasWon)
        {
            return;
        }
        // quit: hero keyPress Escape -> uiMessage
        if (Input.GetKeyDown(KeyCode.Escape))
        {
            ShowText("Paused");
        }
    }

    public void ReportContact(GameObject a, GameObject b, bool isTrigger)
    {
        if (a == null || b == null || isGameOver || hasWon)
        {
            return;
        }
        // Both parties may report the same contact; handle it once per frame.
        string key = string.CompareOrdinal(a.name, b.name) <= 0 ? a.name + "|" + b.name : b.name + "|" + a.name;
        int frame;
        if (contactFrames.TryGetValue(key, out frame) && frame == Time.frameCount)
        {
            return;
        }
        contactFrames[key] = Time.frameCount;
        // caught: hero collision guard -> gameOver
        if (!isTrigger && Matches(a, b, "hero", "guard"))
        {
            TriggerGameOver();
        }
        // gemScore: hero triggerEnter gem -> scoreDelta
        if (isTrigger && Matches(a, b, "hero", "gem"))
        {
            AddScore(5);
        }
        // default hazard rule for lava
        if (Matches(a, b, "hero", "lava"))
        {
            TriggerGameOver();
        }
        // default goal rule for exit
        if (Matches(a, b, "hero", "exit"))
        {
            TriggerWin();
        }
    }

    public void AddScore(int amount)
    {
        score += amount;
        PushScore();
        // rich: hero scoreReaches 15 -> win
        if (score >= 15 && firedRules.Add("rich"))
        {
            TriggerWin();
        }
    }

    public void TriggerGameOver()
    {
        if (isGameOver || hasWon)
        {
            return;
        }
        isGameOver = true;
        ShowText("Game Over");
        Time.timeScale = 0f;
    }

    public void TriggerWin()
    {
        if (isGameOver || hasWon)
        {
            return;
        }
        hasWon = true;
        ShowText("You Win!");
        Time.timeScale = 0f;
    }

    private void PushScore()
    {
        if (Hud.Instance != null)
        {
            Hud.Instance.UpdateScore(score);
        }
    }

    private void ShowText(string message)
    {
        if (Hud.Instance != null)
        {
            Hud.Instance.ShowMessage(message);
            return;
        }
        Debug.Log(message);
    }

    private static bool Matches(GameObject a, GameObject b, string first, string second)
    {
        return (a.name == first && b.name == second) || (a.name == second && b.name == first);
    }

    private static bool Involves(GameObject a, GameObject b, string name)
    {
        return a.name == name || b.name == name;
    }

    private static GameObject Pick(GameObject a, GameObject b, string name)
    {
        if (a.name == name)
        {
            return a;
        }
        return b.name == name ? b : GameObject.Find(name);
    }

    private static void DestroyIfPresent(GameObject target)
    {
        if (target != null)
        {
            Destroy(target);
        }
    }
}
